#include "potts/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "potts/unionfind.hpp"

namespace potts {

void SkeletonParams::validate() const {
  if (!(K >= 2.0)) throw std::invalid_argument("SkeletonParams: K must be >= 2");
  if (!(c > 0.0)) throw std::invalid_argument("SkeletonParams: c must be > 0");
  if (!(c * std::log(K) < K))
    throw std::invalid_argument("SkeletonParams: need c log K < K");
}

double SkeletonParams::hat(double r) const { return r + c * std::log(r); }

int Skeleton::find_vertex(Point p) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].pos == p) return static_cast<int>(i);
  return -1;
}

namespace {

std::vector<Point> ball_offsets(const GaugeNorm& norm, double radius) {
  // lattice points with tau(z) <= radius
  double rmax = 1.0;
  for (Vec2 v : norm.ball_vertices()) rmax = std::max(rmax, std::hypot(v[0], v[1]));
  if (norm.ball_vertices().empty()) rmax = 1.0 / norm(1.0, 0.0);
  int bound = static_cast<int>(std::ceil(radius * rmax)) + 1;
  std::vector<Point> out;
  for (int y = -bound; y <= bound; ++y)
    for (int x = -bound; x <= bound; ++x)
      if (norm(x, y) <= radius) out.push_back({x, y});
  return out;
}

struct BuildState {
  const BondConfig& bonds;
  const Domain& dom;
  const GaugeNorm& norm;
  double K, hatK, hat2K;
  std::vector<std::uint8_t> in_cluster;  // C_G mask
  std::vector<std::uint8_t> covered;     // cal C mask
  std::set<int> frontier;                // partial^ext cal C, site indices (row-major = lex)
  std::vector<Point> hat_ball;  // offsets for hat K
  std::vector<int> seen_stamp;  // versioned visited marks
  int stamp_version = 0;
  std::vector<int> stack;

  void cover(Point center) {
    for (Point off : hat_ball) {
      Point p = center + off;
      if (!dom.contains(p)) continue;
      int s = dom.site_index(p);
      if (covered[s]) continue;
      covered[s] = 1;
      frontier.erase(s);
      // newly exposed neighbors
      int cnt;
      const int* inc = dom.incident_edges(s, cnt);
      for (int i = 0; i < cnt; ++i) {
        int t = dom.neighbor_via(s, inc[i]);
        if (!covered[t]) frontier.insert(t);
      }
    }
  }

  // open path from y through uncovered cluster sites that exits B_K(y)
  // outside cal C; the first exit of the ball is in partial^ext B_K(y)
  bool expandable(Point y) {
    int ys = dom.site_index(y);
    if (!in_cluster[ys] || covered[ys]) return false;
    ++stamp_version;
    stack.clear();
    stack.push_back(ys);
    seen_stamp[ys] = stamp_version;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      int cnt;
      const int* inc = dom.incident_edges(u, cnt);
      for (int i = 0; i < cnt; ++i) {
        int e = inc[i];
        if (!bonds.is_open(e)) continue;
        int v = dom.neighbor_via(u, e);
        if (covered[v] || seen_stamp[v] == stamp_version) continue;
        if (norm(dom.site_at(v) - y) > K) return true;  // exit point, uncovered
        seen_stamp[v] = stamp_version;
        stack.push_back(v);
      }
    }
    return false;
  }
};

}  // namespace

Skeleton build_skeleton(const BondConfig& bonds, const Domain& dom,
                        const std::vector<int>& cluster_sites, const std::vector<Point>& marked,
                        const SkeletonParams& params, const GaugeNorm& norm) {
  params.validate();
  if (marked.empty()) throw std::invalid_argument("build_skeleton: no marked vertices");

  BuildState st{bonds,
                dom,
                norm,
                params.K,
                params.hat(params.K),
                params.hat(2.0 * params.K),
                std::vector<std::uint8_t>(dom.n_sites(), 0),
                std::vector<std::uint8_t>(dom.n_sites(), 0),
                {},
                ball_offsets(norm, params.hat(params.K)),
                std::vector<int>(dom.n_sites(), 0),
                0,
                {}};
  for (int s : cluster_sites) st.in_cluster[s] = 1;
  std::vector<Point> remaining = marked;  // G \ V, kept sorted row-major
  std::sort(remaining.begin(), remaining.end(), lex_less);
  for (Point g : remaining)
    if (!dom.contains(g) || !st.in_cluster[dom.site_index(g)])
      throw std::invalid_argument("build_skeleton: marked vertex outside the cluster");

  Skeleton skel;
  skel.params = params;
  const std::vector<Point> k_ball = ball_offsets(norm, params.K);
  auto ball_sites = [&](Point center, bool minus_covered) {
    std::vector<Point> out;
    for (Point off : k_ball) {
      Point p = center + off;
      if (!dom.contains(p)) continue;
      if (minus_covered && st.covered[dom.site_index(p)]) continue;
      out.push_back(p);
    }
    return out;
  };

  auto add_vertex = [&](Point pos, Skeleton::Origin origin, std::vector<Point> ball) {
    Skeleton::Vertex v;
    v.pos = pos;
    v.origin = origin;
    v.ball = std::move(ball);
    if (origin == Skeleton::Origin::root) {
      v.group = static_cast<int>(skel.groups.size());
      skel.groups.emplace_back();
    } else {
      v.group = static_cast<int>(skel.groups.size()) - 1;
      // parent: smallest in-group index within hat-2K range
      for (int id : skel.groups[v.group]) {
        if (norm(pos - skel.vertices[id].pos) <= st.hat2K) {
          v.parent = id;
          break;
        }
      }
      if (v.parent < 0) throw std::logic_error("build_skeleton: vertex with no in-range parent");
    }
    int id = static_cast<int>(skel.vertices.size());
    skel.groups[v.group].push_back(id);
    if (v.parent >= 0) skel.edges.emplace_back(v.parent, id);
    skel.vertices.push_back(std::move(v));
    remaining.erase(std::remove(remaining.begin(), remaining.end(), pos), remaining.end());
    st.cover(pos);
  };

  // step 1: first root
  add_vertex(remaining.front(), Skeleton::Origin::root, ball_sites(remaining.front(), false));

  while (true) {
    // step 2: minimal leftover marked vertex within hat-2K of any vertex
    bool advanced = false;
    for (Point u : remaining) {
      bool near = false;
      for (const auto& v : skel.vertices)
        if (norm(u - v.pos) <= st.hat2K) {
          near = true;
          break;
        }
      if (near) {
        add_vertex(u, Skeleton::Origin::step2, ball_sites(u, false));
        advanced = true;
        break;
      }
    }
    if (advanced) continue;

    // step 4: minimal frontier vertex with an uncovered ball exit
    int chosen = -1;
    for (int y : st.frontier) {
      if (!st.in_cluster[y]) continue;
      if (st.expandable(dom.site_at(y))) {
        chosen = y;
        break;
      }
    }
    if (chosen >= 0) {
      Point y = dom.site_at(chosen);
      add_vertex(y, Skeleton::Origin::step4, ball_sites(y, true));
      continue;
    }

    // step 5: new root from the leftover marked vertices
    if (remaining.empty()) break;
    add_vertex(remaining.front(), Skeleton::Origin::root, ball_sites(remaining.front(), false));
  }
  return skel;
}

SkeletonCheck check_skeleton(const Skeleton& skel, const BondConfig& bonds, const Domain& dom,
                             const std::vector<int>& cluster_sites,
                             const std::vector<Point>& marked, const GaugeNorm& norm) {
  SkeletonCheck out;
  // (1) marked vertices appear among the skeleton vertices
  out.marked_in_vertices = true;
  for (Point g : marked)
    if (skel.find_vertex(g) < 0) out.marked_in_vertices = false;

  // (2) marked pairs connected in the cluster are in one skeleton tree
  UnionFind uf(dom.n_sites());
  std::vector<std::uint8_t> in_cluster(dom.n_sites(), 0);
  for (int s : cluster_sites) in_cluster[s] = 1;
  for (int e = 0; e < dom.n_edges(); ++e) {
    if (!bonds.is_open(e)) continue;
    int a = dom.site_index(dom.edge(e).a), b = dom.site_index(dom.edge(e).b);
    if (in_cluster[a] && in_cluster[b]) uf.merge(a, b);
  }
  out.connectivity_preserved = true;
  for (std::size_t i = 0; i < marked.size(); ++i)
    for (std::size_t j = i + 1; j < marked.size(); ++j) {
      int a = dom.site_index(marked[i]), b = dom.site_index(marked[j]);
      if (!uf.connected(a, b)) continue;
      int va = skel.find_vertex(marked[i]), vb = skel.find_vertex(marked[j]);
      if (va < 0 || vb < 0 || skel.vertices[va].group != skel.vertices[vb].group)
        out.connectivity_preserved = false;
    }

  // (3) cluster covered by hat-2K balls of the vertices
  const double r = skel.params.hat(2.0 * skel.params.K);
  out.cluster_covered = true;
  for (int s : cluster_sites) {
    Point p = dom.site_at(s);
    bool covered = false;
    for (const auto& v : skel.vertices)
      if (norm(p - v.pos) <= r) {
        covered = true;
        break;
      }
    if (!covered) {
      out.cluster_covered = false;
      break;
    }
  }
  return out;
}

std::vector<int> SkeletonCheck::failed_items() const {
  std::vector<int> out;
  if (!marked_in_vertices) out.push_back(1);
  if (!connectivity_preserved) out.push_back(2);
  if (!cluster_covered) out.push_back(3);
  return out;
}

namespace {
std::vector<int> path_to_root(const Skeleton& skel, int v) {
  std::vector<int> out;
  for (int u = v; u >= 0; u = skel.vertices[u].parent) out.push_back(u);
  return out;
}

// unique path between two vertices of one tree
std::vector<int> tree_path(const Skeleton& skel, int a, int b) {
  auto pa = path_to_root(skel, a);
  auto pb = path_to_root(skel, b);
  std::vector<std::uint8_t> in_pa(skel.vertices.size(), 0);
  for (int u : pa) in_pa[u] = 1;
  int meet = -1;
  for (int u : pb)
    if (in_pa[u]) {
      meet = u;
      break;
    }
  if (meet < 0) throw std::logic_error("tree_path: vertices in different trees");
  std::vector<int> out;
  for (int u : pa) {
    out.push_back(u);
    if (u == meet) break;
  }
  std::vector<int> tail;
  for (int u : pb) {
    if (u == meet) break;
    tail.push_back(u);
  }
  out.insert(out.end(), tail.rbegin(), tail.rend());
  return out;
}
}  // namespace

TrunkDecomposition trunk_branches(const Skeleton& skel, const std::array<Point, 3>& terminals) {
  std::array<int, 3> ids{};
  for (int i = 0; i < 3; ++i) {
    ids[i] = skel.find_vertex(terminals[i]);
    if (ids[i] < 0) throw std::invalid_argument("trunk_branches: terminal is not a skeleton vertex");
  }
  int g = skel.vertices[ids[0]].group;
  for (int i : {1, 2})
    if (skel.vertices[ids[i]].group != g)
      throw std::invalid_argument("trunk_branches: terminals in distinct trees");

  auto p01 = tree_path(skel, ids[0], ids[1]);
  auto p02 = tree_path(skel, ids[0], ids[2]);
  auto p12 = tree_path(skel, ids[1], ids[2]);
  std::set<int> trunk(p01.begin(), p01.end());
  trunk.insert(p02.begin(), p02.end());
  trunk.insert(p12.begin(), p12.end());

  TrunkDecomposition td;
  td.trunk.assign(trunk.begin(), trunk.end());
  for (int v : skel.groups[g])
    if (!trunk.count(v)) td.branches.push_back(v);
  td.is_tripod = td.branches.empty();

  // the meeting vertex lies on all three pairwise paths
  std::set<int> s01(p01.begin(), p01.end()), s02(p02.begin(), p02.end());
  for (int v : p12)
    if (s01.count(v) && s02.count(v)) {
      td.triple_point = v;
      break;
    }
  if (td.triple_point < 0) throw std::logic_error("trunk_branches: no meeting vertex");

  // legs from the triple point outward
  for (int i = 0; i < 3; ++i) {
    auto leg = tree_path(skel, td.triple_point, ids[i]);
    td.legs[i] = leg;
  }
  return td;
}

std::vector<int> cone_points(const std::vector<Point>& leg, Vec2 apex_direction, double kappa) {
  if (leg.empty()) throw std::invalid_argument("cone_points: empty leg");
  double dn = std::hypot(apex_direction[0], apex_direction[1]);
  if (dn <= 0) throw std::invalid_argument("cone_points: zero apex direction");
  const double cos_cone = std::cos(2.0 * kappa);
  auto in_double_cone = [&](Point z) {
    if (z.x == 0 && z.y == 0) return true;
    double zn = std::hypot(static_cast<double>(z.x), static_cast<double>(z.y));
    double c = (z.x * apex_direction[0] + z.y * apex_direction[1]) / (zn * dn);
    return std::abs(c) >= cos_cone;  // within 2 kappa of the axis, either sign
  };
  std::vector<int> out;
  for (std::size_t i = 0; i < leg.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < leg.size() && ok; ++j)
      if (!in_double_cone(leg[j] - leg[i])) ok = false;
    if (ok) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::string skeleton_to_json(const Skeleton& skel) {
  nlohmann::json j;
  j["schema"] = "skeleton/1";
  j["K"] = skel.params.K;
  j["c"] = skel.params.c;
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (const auto& v : skel.vertices) {
    nlohmann::json jv;
    jv["pos"] = {v.pos.x, v.pos.y};
    jv["group"] = v.group;
    jv["parent"] = v.parent;
    jv["origin"] = v.origin == Skeleton::Origin::root
                       ? "root"
                       : (v.origin == Skeleton::Origin::step2 ? "step2" : "step4");
    jv["ball_size"] = v.ball.size();
    verts.push_back(jv);
  }
  auto& edges = j["edges"] = nlohmann::json::array();
  for (auto [a, b] : skel.edges) edges.push_back({a, b});
  j["n_groups"] = skel.groups.size();
  return j.dump(2);
}

}  // namespace potts
