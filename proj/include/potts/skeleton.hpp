#ifndef POTTS_SKELETON_HPP
#define POTTS_SKELETON_HPP

#include <array>
#include <string>
#include <vector>

#include "potts/bonds.hpp"
#include "potts/gauge.hpp"
#include "potts/lattice.hpp"

namespace potts {

struct SkeletonParams {
  double K = 4.0;  // tau-ball radius
  double c = 2.0;  // hat padding: hat B_K = B_{K + c log K}

  void validate() const;
  double hat(double r) const;  // r + c log r
};

// Coarse-grained forest of tau-ball centers covering a boundary-marked
// cluster. Vertices are recorded in construction order; each group is a
// tree through parent links.
struct Skeleton {
  enum class Origin : std::uint8_t { root, step2, step4 };

  struct Vertex {
    Point pos;
    int group = 0;
    Origin origin = Origin::root;
    int parent = -1;               // global vertex id
    std::vector<Point> ball;       // A_i^l
  };

  SkeletonParams params;
  std::vector<Vertex> vertices;
  std::vector<std::vector<int>> groups;    // group -> vertex ids, in order
  std::vector<std::pair<int, int>> edges;  // (parent, child)

  int find_vertex(Point p) const;  // -1 if absent
};

// Steps 1-5 at scale K: grow hat-K balls from the minimal marked vertex,
// absorb marked vertices within hat-2K range, expand through ball-exit
// connections, restart from leftover marked vertices. Deterministic;
// "minimal" always means row-major order.
Skeleton build_skeleton(const BondConfig& bonds, const Domain& dom,
                        const std::vector<int>& cluster_sites, const std::vector<Point>& marked,
                        const SkeletonParams& params, const GaugeNorm& norm);

struct SkeletonCheck {
  bool marked_in_vertices = false;   // (1)
  bool connectivity_preserved = false;  // (2)
  bool cluster_covered = false;      // (3)
  std::vector<int> failed_items() const;
  bool ok() const { return marked_in_vertices && connectivity_preserved && cluster_covered; }
};

SkeletonCheck check_skeleton(const Skeleton& skel, const BondConfig& bonds, const Domain& dom,
                             const std::vector<int>& cluster_sites,
                             const std::vector<Point>& marked, const GaugeNorm& norm);

struct TrunkDecomposition {
  std::vector<int> trunk;     // vertex ids spanning the three terminals
  std::vector<int> branches;  // the rest
  int triple_point = -1;      // meeting vertex of the three paths
  std::array<std::vector<int>, 3> legs;  // triple point outward, inclusive
  bool is_tripod = false;     // no branches (shape T1)
};

TrunkDecomposition trunk_branches(const Skeleton& skel, const std::array<Point, 3>& terminals);

// Vertices w of the leg with leg in (w - Y) cup (w + Y), Y the 2 kappa cone
// around the apex direction. Returns indices into the leg.
std::vector<int> cone_points(const std::vector<Point>& leg, Vec2 apex_direction, double kappa);

std::string skeleton_to_json(const Skeleton& skel);

}  // namespace potts

#endif
