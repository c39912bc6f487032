#ifndef POTTS_EXACT_HPP
#define POTTS_EXACT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "potts/params.hpp"

namespace potts::oracle {

// Brute-force enumeration graphs: <= 14 vertices, <= 16 edges (2^16
// configurations). Multigraphs allowed (duals of small boxes need them).
struct TinyGraph {
  std::string name;
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> frozen;          // -1 free, >= 0 color class S_i
  std::vector<std::uint8_t> wired;  // boundary designation for #_w counting

  struct Dual {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;  // dual edge e crosses primal edge e
    int ghost = -1;                          // outer-face vertex
  };
  std::optional<Dual> dual;

  int n_free() const;
  bool is_boundary(int v) const { return wired[v] != 0 || frozen[v] >= 0; }
  void validate() const;
};

TinyGraph single_edge();
TinyGraph path_graph(int k);                   // 1 x k sites
TinyGraph grid_graph(int w, int h);            // w x h sites, with planar dual
TinyGraph box_graph(int m);                    // Lambda_m = (2m+1) x (2m+1) sites
TinyGraph k4_graph();                          // self-dual
// grid with an explicit boundary ring of frozen spins (pure color, or a
// cyclic color pattern when several are given)
TinyGraph grid_with_boundary(int w, int h, const std::vector<int>& pattern);

// the battery used by oracle-check and the acceptance suite
std::vector<TinyGraph> bundled_graphs();

struct ExactDistribution {
  std::vector<double> prob;  // FK: edge bitmask; Potts: mixed-radix over free vertices
  double z = 0.0;            // partition function
  double total() const;
};

struct FKOptions {
  bool wired_counting = false;        // #_w: skip clusters touching the boundary
  bool condition_on_classes = false;  // restrict to Cond: no two classes joined
};

ExactDistribution enumerate_fk(const TinyGraph& g, const FKParams& fk, const FKOptions& opt);
ExactDistribution enumerate_potts(const TinyGraph& g, const PottsParams& pp);

// TV between the exact Potts measure pushed through the edge rule and the
// exact conditioned wired FK measure, and between the exact FK measure
// pushed through cluster coloring and the exact Potts measure. Returns the
// larger of the two.
double check_es_identity(const TinyGraph& g, const PottsParams& pp);

// Per-configuration error between the free FK measure and the pushforward
// of the wired dual measure (at dual parameters) under complementation.
double check_duality(const TinyGraph& g, const FKParams& fk);

// TV distance between pi P and pi for the exact single-site sweep kernel,
// resp. the exact cluster-update kernel, with pi the enumerated Boltzmann
// distribution. Both work for any frozen boundary.
double heat_bath_invariance_tv(const TinyGraph& g, const PottsParams& pp);
double cluster_invariance_tv(const TinyGraph& g, const PottsParams& pp);

// log Z of the Potts model and of the coupled FK model agree up to the
// e^{-beta |E|} prefactor; returns the absolute defect of the identity.
double free_energy_defect(const TinyGraph& g, const PottsParams& pp);

// marginals of enumerated tables
double potts_marginal(const TinyGraph& g, const ExactDistribution& d, int q, int vertex,
                      int color);
std::vector<double> fk_edge_marginals(const ExactDistribution& d, int n_edges);

// P(omega >= omega_0) for all principal increasing events; used for the
// stochastic-domination comparison with Bernoulli percolation.
std::vector<double> upset_probabilities(const ExactDistribution& d, int n_edges);
std::vector<double> bernoulli_upset_probabilities(double density, int n_edges);

// fixture replay: raw probability table + JSON metadata
void save_distribution(const std::string& path_prefix, const ExactDistribution& d,
                       const std::string& meta_json);
ExactDistribution load_distribution(const std::string& path_prefix, std::string& meta_json);

}  // namespace potts::oracle

#endif
