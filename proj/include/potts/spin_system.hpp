#ifndef POTTS_SPIN_SYSTEM_HPP
#define POTTS_SPIN_SYSTEM_HPP

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "potts/lattice.hpp"
#include "potts/params.hpp"
#include "potts/rng.hpp"
#include "potts/unionfind.hpp"

namespace potts {

// A finite graph with an optional frozen color per vertex. Boundary
// conditions are encoded by freezing: free = nothing frozen, pure = all
// frozen vertices share one color, mixed = several colors frozen.
// Colors are 0-based internally, {1..q} only at the user surface.
struct SpinLattice {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> frozen;  // -1 = free

  void finalize();

  int degree(int v) const { return adj_start[v + 1] - adj_start[v]; }
  // neighbor list entries: (vertex, edge id)
  const std::pair<int, int>* neighbors(int v) const { return &adj[adj_start[v]]; }

  bool has_frozen() const;
  bool frozen_is_pure() const;  // at most one distinct frozen color

  std::vector<int> adj_start;
  std::vector<std::pair<int, int>> adj;
};

SpinLattice make_box_lattice(const Domain& dom);  // all vertices free

// colors valid w.r.t. lattice: frozen vertices carry their frozen color
std::vector<int> random_colors(const SpinLattice& lat, int q, SplitMix64& rng);

// H(eta) = -sum over edges with at least one free endpoint of delta_{eta_i,eta_j}
double potts_energy(const SpinLattice& lat, const std::vector<int>& colors);

// One full sweep of single-site conditional resampling, in vertex order.
// Invariant distribution is the Potts measure with the frozen boundary.
void heat_bath_sweep(const SpinLattice& lat, std::vector<int>& colors, const PottsParams& pp,
                     SplitMix64& rng);

// Edge rule of the coupling: closed if endpoint spins differ, otherwise
// closed with probability e^{-beta}. Output indexed like lat.edges.
std::vector<std::uint8_t> es_spin_to_bond(const SpinLattice& lat, const std::vector<int>& colors,
                                          double beta, SplitMix64& rng);

struct CondViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cluster coloring: clusters touching a frozen vertex receive its color,
// all other clusters a uniform color, independently. Throws CondViolation
// if one cluster touches two distinct frozen colors.
std::vector<int> es_bond_to_spin(const SpinLattice& lat, const std::vector<std::uint8_t>& bonds,
                                 int q, SplitMix64& rng);

// Reusable buffers for cluster updates.
struct SwScratch {
  UnionFind uf{0};
  std::vector<int> cluster_color;
  void resize(int n) {
    if (cluster_color.size() != static_cast<std::size_t>(n)) {
      uf = UnionFind(n);
      cluster_color.assign(n, -2);
    }
  }
};

// Cluster update valid for any frozen boundary: bond step between
// equal-color endpoints, then cluster recoloring with frozen colors forced.
// Distinct frozen colors are never joined (bonds only open between equal
// spins), so the forced coloring is always consistent.
void cluster_step(const SpinLattice& lat, std::vector<int>& colors, const PottsParams& pp,
                  SplitMix64& rng, SwScratch& scratch);

// Swendsen-Wang step restricted to free or pure-color boundary conditions;
// throws std::invalid_argument when the frozen set carries mixed colors
// (use heat_bath_sweep or cluster_step for those).
void swendsen_wang_step(const SpinLattice& lat, std::vector<int>& colors, const PottsParams& pp,
                        SplitMix64& rng);

}  // namespace potts

#endif
