#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "potts/clusters.hpp"
#include "potts/dual_box.hpp"
#include "potts/skeleton.hpp"

using namespace potts;

namespace {

BondConfig closed_config(int n) {
  return BondConfig::all(n, LatticeTag::primal, WiringTag::free_bc, false);
}
void open_path(BondConfig& bc, const Domain& dom, const std::vector<Point>& path) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    bc.set(dom.edge_index(path[i], path[i + 1]), true);
}
std::vector<Point> straight(Point from, Point step, int count) {
  std::vector<Point> out{from};
  for (int i = 0; i < count; ++i) out.push_back(out.back() + step);
  return out;
}
std::vector<int> to_sites(const Domain& dom, const std::vector<Point>& pts) {
  std::vector<int> out;
  for (Point p : pts) out.push_back(dom.site_index(p));
  return out;
}

// hand-assembled skeleton for the trunk tests
Skeleton hand_skeleton(const std::vector<std::pair<Point, int>>& vertices_with_parents) {
  Skeleton s;
  s.params = {4.0, 2.0};
  s.groups.emplace_back();
  for (auto& [pos, parent] : vertices_with_parents) {
    Skeleton::Vertex v;
    v.pos = pos;
    v.group = 0;
    v.parent = parent;
    v.origin = parent < 0 ? Skeleton::Origin::root : Skeleton::Origin::step4;
    int id = static_cast<int>(s.vertices.size());
    s.groups[0].push_back(id);
    if (parent >= 0) s.edges.emplace_back(parent, id);
    s.vertices.push_back(v);
  }
  return s;
}

}  // namespace

TEST_CASE("skeleton params validation") {
  CHECK_THROWS(SkeletonParams{1.0, 2.0}.validate());
  CHECK_THROWS(SkeletonParams{4.0, 4.0}.validate());  // c log K >= K
  CHECK_NOTHROW(SkeletonParams{4.0, 2.0}.validate());
}

TEST_CASE("single ball cluster gives a one-vertex skeleton") {
  const int n = 10;
  Domain dom(n);
  BondConfig bc = closed_config(n);
  GaugeNorm norm = GaugeNorm::linf_ball(1.0);
  std::vector<Point> marked{{0, 0}};
  Skeleton skel = build_skeleton(bc, dom, to_sites(dom, {{0, 0}}), marked, {4.0, 2.0}, norm);
  CHECK(skel.vertices.size() == 1);
  CHECK(skel.edges.empty());
  CHECK(skel.groups.size() == 1);
  CHECK(skel.vertices[0].origin == Skeleton::Origin::root);
}

TEST_CASE("two marked vertices within hat-2K give one edge") {
  const int n = 12;
  Domain dom(n);
  BondConfig bc = closed_config(n);
  auto path = straight({0, 0}, {1, 0}, 5);
  open_path(bc, dom, path);
  GaugeNorm norm = GaugeNorm::linf_ball(1.0);
  std::vector<Point> marked{{0, 0}, {5, 0}};
  Skeleton skel = build_skeleton(bc, dom, to_sites(dom, path), marked, {4.0, 2.0}, norm);
  REQUIRE(skel.vertices.size() == 2);
  CHECK(skel.edges.size() == 1);
  CHECK(skel.vertices[1].origin == Skeleton::Origin::step2);
  CHECK(skel.vertices[1].parent == 0);
}

TEST_CASE("straight path of tau-length 5K gives a chain") {
  const int n = 24;
  Domain dom(n);
  BondConfig bc = closed_config(n);
  auto path = straight({0, 0}, {1, 0}, 20);  // L-inf length 20 = 5K at K=4
  open_path(bc, dom, path);
  GaugeNorm norm = GaugeNorm::linf_ball(1.0);
  Skeleton skel = build_skeleton(bc, dom, to_sites(dom, path), {{0, 0}}, {4.0, 2.0}, norm);
  CHECK(skel.vertices.size() >= 3);
  CHECK(skel.vertices.size() <= 6);
  CHECK(skel.groups.size() == 1);
  const double hat2k = skel.params.hat(8.0);
  for (auto [a, b] : skel.edges)
    CHECK(norm(skel.vertices[a].pos - skel.vertices[b].pos) <= hat2k);
  // trace: the expansion vertices walk along the path
  for (const auto& v : skel.vertices) CHECK(v.pos.y == 0);
}

TEST_CASE("deleting the outermost vertex breaks the covering item") {
  const int n = 32;
  Domain dom(n);
  BondConfig bc = closed_config(n);
  auto path = straight({0, 0}, {1, 0}, 28);
  open_path(bc, dom, path);
  GaugeNorm norm = GaugeNorm::linf_ball(1.0);
  std::vector<Point> marked{{0, 0}};
  auto cluster = to_sites(dom, path);
  Skeleton skel = build_skeleton(bc, dom, cluster, marked, {4.0, 2.0}, norm);
  SkeletonCheck ok = check_skeleton(skel, bc, dom, cluster, marked, norm);
  CHECK(ok.ok());
  REQUIRE(skel.vertices.size() >= 3);
  Skeleton mutilated = skel;
  mutilated.vertices.pop_back();  // outermost expansion vertex
  mutilated.groups[0].pop_back();
  SkeletonCheck bad = check_skeleton(mutilated, bc, dom, cluster, marked, norm);
  CHECK(!bad.cluster_covered);
  auto failed = bad.failed_items();
  CHECK(std::find(failed.begin(), failed.end(), 3) != failed.end());
}

TEST_CASE("marked vertex outside the cluster is rejected") {
  const int n = 8;
  Domain dom(n);
  BondConfig bc = closed_config(n);
  GaugeNorm norm = GaugeNorm::linf_ball(1.0);
  CHECK_THROWS_AS(
      build_skeleton(bc, dom, to_sites(dom, {{0, 0}}), {{3, 3}}, {4.0, 2.0}, norm),
      std::invalid_argument);
}

TEST_CASE("determinism: identical inputs give identical skeletons") {
  const int n = 16;
  PottsParams pp{2, 1.2};
  BondConfig primal = sample_conditioned_fk(n, pp, BoundaryCondition::alternating(), {150, 5}, 42);
  Domain dom(n);
  GaugeNorm norm = GaugeNorm::linf_ball(0.8);
  auto marked = marked_vertices(primal, dom, 8);
  if (marked.empty()) return;  // nothing reaches the inner box in this sample
  auto cluster = annulus_boundary_set(primal, dom, 8);
  Skeleton a = build_skeleton(primal, dom, cluster, marked, {4.0, 2.0}, norm);
  Skeleton b = build_skeleton(primal, dom, cluster, marked, {4.0, 2.0}, norm);
  CHECK(skeleton_to_json(a) == skeleton_to_json(b));
}

TEST_CASE("basic skeleton properties on sampled clusters") {
  const int n = 14, m = 7;
  Domain dom(n);
  GaugeNorm norm = GaugeNorm::linf_ball(0.7);
  int built = 0;
  for (int rep = 0; rep < 40; ++rep) {
    PottsParams pp{rep % 2 ? 2 : 3, rep % 2 ? 1.1 : 1.25};
    BondConfig primal =
        sample_conditioned_fk(n, pp, BoundaryCondition::alternating(), {120, 4}, 1000 + rep);
    auto marked = marked_vertices(primal, dom, m);
    if (marked.empty()) continue;
    auto cluster = annulus_boundary_set(primal, dom, m);
    Skeleton skel = build_skeleton(primal, dom, cluster, marked, {3.0, 1.0}, norm);
    SkeletonCheck chk = check_skeleton(skel, primal, dom, cluster, marked, norm);
    CHECK(chk.ok());
    ++built;
    // vertex economy: coarse sanity bound against the cluster size
    double tau1 = norm(1, 0);
    double bound = 4.0 * (tau1 * cluster.size() / 3.0 + marked.size() + 1);
    CHECK(static_cast<double>(skel.vertices.size()) <= bound);
  }
  CHECK(built > 5);
}

TEST_CASE("trunk of a path with terminals at the ends and middle") {
  // chain 0-1-2-3-4 along x
  std::vector<std::pair<Point, int>> verts;
  for (int i = 0; i < 5; ++i) verts.push_back({{4 * i, 0}, i - 1});
  Skeleton s = hand_skeleton(verts);
  TrunkDecomposition td = trunk_branches(s, {Point{0, 0}, Point{16, 0}, Point{8, 0}});
  CHECK(td.trunk.size() == 5);
  CHECK(td.branches.empty());
  CHECK(td.is_tripod);
  CHECK(s.vertices[td.triple_point].pos == Point{8, 0});
}

TEST_CASE("star with a spur: the spur is a branch") {
  std::vector<std::pair<Point, int>> verts{
      {{0, 0}, -1},   // 0 center
      {{8, 0}, 0},    // 1
      {{-8, 0}, 0},   // 2
      {{0, 8}, 0},    // 3
      {{0, -8}, 0},   // 4 spur
  };
  Skeleton s = hand_skeleton(verts);
  TrunkDecomposition td = trunk_branches(s, {Point{8, 0}, Point{-8, 0}, Point{0, 8}});
  CHECK(td.trunk.size() == 4);
  REQUIRE(td.branches.size() == 1);
  CHECK(s.vertices[td.branches[0]].pos == Point{0, -8});
  CHECK(!td.is_tripod);
  CHECK(s.vertices[td.triple_point].pos == Point{0, 0});
  // without the spur the decomposition is a tripod with three legs
  verts.pop_back();
  Skeleton t = hand_skeleton(verts);
  TrunkDecomposition td2 = trunk_branches(t, {Point{8, 0}, Point{-8, 0}, Point{0, 8}});
  CHECK(td2.is_tripod);
  for (const auto& leg : td2.legs) {
    CHECK(leg.front() == td2.triple_point);
    CHECK(leg.size() == 2);
  }
}

TEST_CASE("terminals in distinct trees are rejected") {
  Skeleton s;
  s.params = {4.0, 2.0};
  for (int g = 0; g < 2; ++g) {
    s.groups.emplace_back();
    Skeleton::Vertex v;
    v.pos = {g * 20, 0};
    v.group = g;
    v.parent = -1;
    s.groups[g].push_back(g);
    s.vertices.push_back(v);
  }
  CHECK_THROWS_AS(trunk_branches(s, {Point{0, 0}, Point{20, 0}, Point{0, 0}}),
                  std::invalid_argument);
}

TEST_CASE("cone points of a straight leg") {
  std::vector<Point> leg;
  for (int i = 0; i <= 6; ++i) leg.push_back({3 * i, 0});
  auto pts = cone_points(leg, {1.0, 0.0}, 0.2);
  CHECK(pts.size() == leg.size());
}

TEST_CASE("cone points: large zigzag excludes interior kink") {
  std::vector<Point> leg{{0, 0}, {5, 0}, {10, 8}, {15, 0}, {20, 0}};
  auto pts = cone_points(leg, {1.0, 0.0}, M_PI / 16.0);  // 2 kappa = 22.5 degrees
  std::set<int> s(pts.begin(), pts.end());
  CHECK(s.count(0) == 1);
  CHECK(s.count(2) == 0);  // the kink
  CHECK(s.count(1) == 0);
  CHECK(s.count(4) == 1);
}

TEST_CASE("cone points of a single-vertex leg") {
  auto pts = cone_points({{3, 3}}, {0.0, 1.0}, 0.3);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0] == 0);
  CHECK_THROWS_AS(cone_points({}, {1.0, 0.0}, 0.3), std::invalid_argument);
}

TEST_CASE("skeleton json dump") {
  const int n = 10;
  Domain dom(n);
  BondConfig bc = closed_config(n);
  auto path = straight({0, 0}, {1, 0}, 8);
  open_path(bc, dom, path);
  GaugeNorm norm = GaugeNorm::linf_ball(1.0);
  Skeleton skel =
      build_skeleton(bc, dom, to_sites(dom, path), {{0, 0}, {8, 0}}, {4.0, 2.0}, norm);
  std::string js = skeleton_to_json(skel);
  CHECK(js.find("skeleton/1") != std::string::npos);
  CHECK(js.find("step2") != std::string::npos);
}
