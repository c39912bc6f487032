#ifndef POTTS_STEINER_HPP
#define POTTS_STEINER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "potts/gauge.hpp"

namespace potts::steiner {

using potts::GaugeNorm;
using potts::Vec2;

// all set partitions of {0..n-1}; hard cap n <= 12 (Bell(12) ~ 4.2e6)
std::vector<std::vector<std::vector<int>>> enumerate_partitions(int n);
std::uint64_t bell_number(int n);

struct TerminalSet {
  std::vector<Vec2> points;
  std::vector<std::vector<int>> blocks;  // disjoint, covering all points

  static TerminalSet trivial(std::vector<Vec2> pts);  // one block
  void validate() const;
};

struct TripodSolution {
  Vec2 junction{0.0, 0.0};
  double value = 0.0;      // phi(junction) = sum tau(u_i - junction)
  bool degenerate = false; // junction collapsed onto a terminal
  int terminal_index = -1;
  int passes = 0;
};

// minimize phi(y) = sum_i tau(u_i - y); multi-started direction-set descent
// with golden-section line searches on the convex objective
TripodSolution solve_tripod(Vec2 u1, Vec2 u2, Vec2 u3, const GaugeNorm& norm);

struct SteinerTree {
  std::vector<Vec2> terminals;
  std::vector<Vec2> inner;                 // degree-3 nodes, post-optimization
  std::vector<std::pair<int, int>> edges;  // node ids: terminals, then inner
  double length = 0.0;

  Vec2 node(int id) const {
    return id < static_cast<int>(terminals.size())
               ? terminals[id]
               : inner[id - static_cast<int>(terminals.size())];
  }
};

struct SteinerForest {
  std::vector<SteinerTree> trees;  // one per non-singleton block
  double length = 0.0;
};

// minimum total tau-length network spanning each block within one tree;
// full Steiner topologies enumerated per block (sizes <= 5), inner node
// positions optimized by convex descent
SteinerForest solve_steiner_forest(const TerminalSet& terminals, const GaugeNorm& norm);

struct ForestAudit {
  std::vector<int> inner_degrees;     // non-collapsed incident edges
  bool all_inner_degree_three = true;
  double min_inner_angle = 0.0;       // radians, over inner nodes
  double angle_margin = 0.0;          // min angle - (pi/2 + eta_tol)
  double min_node_separation = 0.0;   // same tree, inside the half box
  double min_tree_distance = 0.0;     // across trees, inside the half box
  double perturbation_margin = 0.0;   // min length increase over random probes
};

ForestAudit audit_forest(const SteinerForest& forest, const GaugeNorm& norm, double eta_tol,
                         std::uint64_t seed);

std::string forest_to_json(const SteinerForest& forest);
std::string forest_to_svg(const SteinerForest& forest);

}  // namespace potts::steiner

#endif
