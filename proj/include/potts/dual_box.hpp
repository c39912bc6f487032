#ifndef POTTS_DUAL_BOX_HPP
#define POTTS_DUAL_BOX_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "potts/bonds.hpp"
#include "potts/lattice.hpp"
#include "potts/params.hpp"
#include "potts/spin_system.hpp"

namespace potts {

// Boundary condition sigma on the dual ring partial Lambda_n^*, i.e. the 8n
// sigma-carrying sites in counterclockwise cyclic order.
struct BoundaryCondition {
  enum class Kind { free_bc, pure, dobrushin, thirds, alternating, custom };

  Kind kind = Kind::free_bc;
  int pure_color = 0;           // 0-based
  std::vector<int> custom;      // per ring site, cyclic order

  static BoundaryCondition free() { return {}; }
  static BoundaryCondition pure_bc(int color) { return {Kind::pure, color, {}}; }
  static BoundaryCondition dobrushin() { return {Kind::dobrushin, 0, {}}; }
  static BoundaryCondition thirds() { return {Kind::thirds, 0, {}}; }
  static BoundaryCondition alternating() { return {Kind::alternating, 0, {}}; }
  static BoundaryCondition custom_bc(std::vector<int> colors) {
    return {Kind::custom, 0, std::move(colors)};
  }
  static BoundaryCondition parse(const std::string& text);  // e.g. "pure:1"

  // per ring site colors, -1 everywhere for free
  std::vector<int> ring_colors(const DualDomain& dd, int q) const;
  bool mixed() const { return kind != Kind::free_bc && kind != Kind::pure; }
  std::string descriptor() const;
};

// The Potts model of the coupling lives on Lambda_n^*: free spins on the
// (2n)^2 interior faces, sigma frozen on the ring. Dual bond samples are the
// wired FK measure on E_n^* conditioned on Cond_n[sigma]; complementation
// gives the free subcritical FK measure on E_n conditioned on Cond_n[sigma].
class ConditionedChain {
 public:
  ConditionedChain(int n, PottsParams pp, BoundaryCondition bc, std::uint64_t seed,
                   std::uint64_t stream_id = 0);

  void step();                // one cluster update (valid for any sigma)
  void heat_bath();           // one single-site sweep
  void run(int steps);        // cluster updates
  // dynamics = how many heat-bath sweeps to interleave per cluster step
  void set_heat_bath_interleave(int k) { hb_interleave_ = k; }

  BondConfig dual_sample();    // es_spin_to_bond on E_n^*
  BondConfig primal_sample();  // complemented: free FK on E_n given Cond

  const SpinLattice& lattice() const { return lat_; }
  const DualDomain& dual() const { return dd_; }
  const std::vector<int>& colors() const { return colors_; }
  const std::vector<int>& ring_sigma() const { return sigma_; }
  int spin_at_face(int a, int b) const { return colors_[dd_.face_index(a, b)]; }
  const PottsParams& params() const { return pp_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  const BoundaryCondition& boundary() const { return bc_; }
  SplitMix64& rng() { return rng_; }

 private:
  int n_;
  PottsParams pp_;
  BoundaryCondition bc_;
  DualDomain dd_;
  SpinLattice lat_;
  std::vector<int> colors_;
  std::vector<int> sigma_;  // per ring site
  SplitMix64 rng_;
  SwScratch scratch_;
  std::uint64_t seed_, stream_id_;
  int hb_interleave_ = 0;
};

// Primal anchor sites on partial Lambda_n for each sigma color change around
// the ring: the boundary site between two differently colored dual ring
// sites, where separating clusters attach.
std::vector<Point> color_change_anchors(const DualDomain& dd, const std::vector<int>& sigma);

struct ConditionedSampleConfig {
  int burn_in = 1000;        // cluster steps before the first sample
  int sample_interval = 10;  // cluster steps between samples
};

// One-shot sample of mu^f_{Lambda_n}( . | Cond_n[sigma]): runs the Potts
// chain with boundary sigma, applies the edge rule, complements. Requires a
// supercritical beta so the primal marginal is subcritical.
BondConfig sample_conditioned_fk(int n, const PottsParams& pp, const BoundaryCondition& bc,
                                 const ConditionedSampleConfig& cfg, std::uint64_t seed);

}  // namespace potts

#endif
