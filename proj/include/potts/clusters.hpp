#ifndef POTTS_CLUSTERS_HPP
#define POTTS_CLUSTERS_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "potts/bonds.hpp"
#include "potts/gauge.hpp"
#include "potts/lattice.hpp"

namespace potts {

struct ClusterLabeling {
  std::vector<int> label;                // per site, dense ids from 0
  std::vector<std::vector<int>> roster;  // id -> site indices
  std::vector<int> open_edges;           // per cluster
  int n_clusters() const { return static_cast<int>(roster.size()); }
};

ClusterLabeling label_clusters(const BondConfig& bonds, const Domain& dom);

// union of clusters meeting partial Lambda_n (site indices, sorted)
std::vector<int> boundary_cluster(const BondConfig& bonds, const Domain& dom);

// C_{m,n}: sites joined to partial Lambda_n by open paths in the annulus
// edge set E_n \ E_m. Isolated boundary sites (no incident open annulus
// edge) are excluded, so an all-closed annulus gives the empty set.
std::vector<int> annulus_boundary_set(const BondConfig& bonds, const Domain& dom, int m);

// G_{m,n} = C_{m,n} cap partial Lambda_m, row-major order
std::vector<Point> marked_vertices(const BondConfig& bonds, const Domain& dom, int m);

// |G_{m,n}| for every m in [1, n-1], computed in one incremental sweep
std::vector<int> marked_counts_all_scales(const BondConfig& bonds, const Domain& dom);

struct FlowerDomain {
  int m = 0;
  std::vector<int> sites;            // D, sorted site indices
  std::vector<std::uint8_t> member;  // mask over domain sites
  std::vector<Point> marked;         // G, row-major
  std::vector<int> wiring;           // partition block id per marked vertex
  std::vector<std::uint8_t> edge_member;  // the flower edge set E_D
};

// The component of Lambda_m in the part of the box not constrained by
// conditioning on C_{m,n}, together with the marked vertices and their
// wiring partition inherited from the annulus connections.
FlowerDomain flower_domain(const BondConfig& bonds, const Domain& dom, int m);

// max m in [1, n-1] with |G_{m,n}| <= M; nullopt encodes "none" (the
// paper's infinity convention)
std::optional<int> scale_M(const BondConfig& bonds, const Domain& dom, int M);

// crossing: open cluster of the annulus joining the inner to the outer box.
bool detect_crossing(const BondConfig& bonds, const Domain& dom, const Annulus& ann);
// circuit: open cluster of the annulus winding around the inner box.
bool detect_circuit(const BondConfig& bonds, const Domain& dom, const Annulus& ann);
// the same two events for the dual configuration on the dual annulus
bool detect_crossing_dual(const BondConfig& dual_bonds, const Domain& dom, const Annulus& ann);
bool detect_circuit_dual(const BondConfig& dual_bonds, const Domain& dom, const Annulus& ann);

struct EventClass {
  enum class Tag { crossing, free_circuit, pure };  // E, F^f, F^(i)
  Tag tag = Tag::crossing;
  int color = -1;  // set for pure
};

struct EventCondViolation : std::runtime_error {
  EventCondViolation() : std::runtime_error("classify_event: central dual cluster reaches two boundary classes") {}
};

// Classification driving the mixture decomposition: crossing of the annulus
// A_{2 ceil(n^eps), n} gives E; otherwise the central dual box either
// connects to exactly one boundary class (F^(i)) or is enclosed by an open
// circuit and connects to none (F^f). The three cases partition every
// Cond-respecting configuration; two reachable classes violate Cond.
EventClass classify_event(const BondConfig& primal, const Domain& dom, const DualDomain& dd,
                          const std::vector<int>& sigma, double eps);

struct StructureClass {
  enum class Tag { S1, S2, S3, none };
  Tag tag = Tag::none;
  std::vector<std::vector<Point>> groups;  // witness sets V^i
};

// Geometric classification of G_{k,n}: empty (S1), two groups with every
// connecting segment meeting the half box (S2), or three groups whose
// Steiner junctions fall inside the half box (S3).
StructureClass classify_structure(const BondConfig& bonds, const Domain& dom, int k, double nu,
                                  const GaugeNorm& norm);

// alpha_i = freq(F^f)/q + freq(F^(i)); together with freq(E) these sum to 1
struct AlphaEstimate {
  std::vector<double> alpha;
  double crossing_freq = 0.0;
};
AlphaEstimate estimate_alpha(const std::vector<EventClass>& events, int q);

}  // namespace potts

#endif
