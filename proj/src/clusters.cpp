#include "potts/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "potts/steiner.hpp"
#include "potts/unionfind.hpp"

namespace potts {

namespace {
int edge_depth(const Domain& dom, int e) {
  const Edge& ed = dom.edge(e);
  return std::max(linf(ed.a), linf(ed.b));
}
}  // namespace

ClusterLabeling label_clusters(const BondConfig& bonds, const Domain& dom) {
  UnionFind uf(dom.n_sites());
  for (int e = 0; e < dom.n_edges(); ++e)
    if (bonds.is_open(e)) uf.merge(dom.site_index(dom.edge(e).a), dom.site_index(dom.edge(e).b));
  ClusterLabeling lab;
  lab.label.assign(dom.n_sites(), -1);
  std::vector<int> root_id(dom.n_sites(), -1);
  for (int s = 0; s < dom.n_sites(); ++s) {
    int r = uf.find(s);
    if (root_id[r] < 0) {
      root_id[r] = lab.n_clusters();
      lab.roster.emplace_back();
      lab.open_edges.push_back(0);
    }
    lab.label[s] = root_id[r];
    lab.roster[root_id[r]].push_back(s);
  }
  for (int e = 0; e < dom.n_edges(); ++e)
    if (bonds.is_open(e)) ++lab.open_edges[lab.label[dom.site_index(dom.edge(e).a)]];
  return lab;
}

std::vector<int> boundary_cluster(const BondConfig& bonds, const Domain& dom) {
  ClusterLabeling lab = label_clusters(bonds, dom);
  const int n = dom.radius();
  std::vector<std::uint8_t> keep(lab.n_clusters(), 0);
  for (int s = 0; s < dom.n_sites(); ++s)
    if (linf(dom.site_at(s)) == n) keep[lab.label[s]] = 1;
  std::vector<int> out;
  for (int s = 0; s < dom.n_sites(); ++s)
    if (keep[lab.label[s]]) out.push_back(s);
  return out;
}

namespace {
// union-find over the open annulus edge set with a virtual boundary root;
// a site is in C_{m,n} iff it is merged with the root
struct AnnulusReach {
  UnionFind uf;
  int root;
  AnnulusReach(const BondConfig& bonds, const Domain& dom, int m)
      : uf(dom.n_sites() + 1), root(dom.n_sites()) {
    const int n = dom.radius();
    for (int e = 0; e < dom.n_edges(); ++e) {
      if (!bonds.is_open(e) || edge_depth(dom, e) <= m) continue;
      int a = dom.site_index(dom.edge(e).a);
      int b = dom.site_index(dom.edge(e).b);
      uf.merge(a, b);
      if (linf(dom.edge(e).a) == n || linf(dom.edge(e).b) == n) uf.merge(a, root);
    }
  }
  bool in_C(int site) { return uf.connected(site, root); }
};
}  // namespace

std::vector<int> annulus_boundary_set(const BondConfig& bonds, const Domain& dom, int m) {
  if (m < 0 || m >= dom.radius())
    throw std::invalid_argument("annulus_boundary_set: need 0 <= m < n");
  AnnulusReach reach(bonds, dom, m);
  std::vector<int> out;
  for (int s = 0; s < dom.n_sites(); ++s)
    if (reach.in_C(s)) out.push_back(s);
  return out;
}

std::vector<Point> marked_vertices(const BondConfig& bonds, const Domain& dom, int m) {
  if (m <= 0 || m >= dom.radius())
    throw std::invalid_argument("marked_vertices: need 0 < m < n");
  AnnulusReach reach(bonds, dom, m);
  std::vector<Point> out;
  for (int s = 0; s < dom.n_sites(); ++s) {
    Point p = dom.site_at(s);
    if (linf(p) == m && reach.in_C(s)) out.push_back(p);
  }
  return out;  // site order is already row-major
}

std::vector<int> marked_counts_all_scales(const BondConfig& bonds, const Domain& dom) {
  const int n = dom.radius();
  std::vector<int> counts(n, 0);  // index m in [1, n-1]; counts[0] unused
  if (n < 2) return counts;
  // edges grouped by depth; activate depth d when the stage drops to m = d-1
  std::vector<std::vector<int>> by_depth(n + 1);
  for (int e = 0; e < dom.n_edges(); ++e)
    if (bonds.is_open(e)) by_depth[edge_depth(dom, e)].push_back(e);
  UnionFind uf(dom.n_sites() + 1);
  const int root = dom.n_sites();
  for (int m = n - 1; m >= 1; --m) {
    for (int e : by_depth[m + 1]) {
      int a = dom.site_index(dom.edge(e).a);
      int b = dom.site_index(dom.edge(e).b);
      uf.merge(a, b);
      if (linf(dom.edge(e).a) == n || linf(dom.edge(e).b) == n) uf.merge(a, root);
    }
    int g = 0;
    const int rroot = uf.find(root);
    for (int x = -m; x <= m; ++x)
      for (int y : {-m, m})
        if (uf.find(dom.site_index({x, y})) == rroot) ++g;
    for (int y = -m + 1; y < m; ++y)
      for (int x : {-m, m})
        if (uf.find(dom.site_index({x, y})) == rroot) ++g;
    counts[m] = g;
  }
  return counts;
}

FlowerDomain flower_domain(const BondConfig& bonds, const Domain& dom, int m) {
  if (m <= 0 || m >= dom.radius())
    throw std::invalid_argument("flower_domain: need 0 < m < n");
  AnnulusReach reach(bonds, dom, m);
  std::vector<std::uint8_t> in_C(dom.n_sites(), 0);
  for (int s = 0; s < dom.n_sites(); ++s) in_C[s] = reach.in_C(s);

  FlowerDomain fd;
  fd.m = m;
  fd.member.assign(dom.n_sites(), 0);
  fd.edge_member.assign(dom.n_edges(), 0);

  // free edges: inside Lambda_m, or annulus edges untouched by C
  auto edge_free = [&](int e) {
    if (edge_depth(dom, e) <= m) return true;
    return !in_C[dom.site_index(dom.edge(e).a)] && !in_C[dom.site_index(dom.edge(e).b)];
  };

  std::queue<int> bfs;
  for (int y = -m; y <= m; ++y)
    for (int x = -m; x <= m; ++x) {
      int s = dom.site_index({x, y});
      fd.member[s] = 1;
      bfs.push(s);
    }
  while (!bfs.empty()) {
    int s = bfs.front();
    bfs.pop();
    int cnt;
    const int* inc = dom.incident_edges(s, cnt);
    for (int i = 0; i < cnt; ++i) {
      int e = inc[i];
      if (!edge_free(e)) continue;
      int t = dom.neighbor_via(s, e);
      if (!fd.member[t]) {
        fd.member[t] = 1;
        bfs.push(t);
      }
    }
  }
  for (int e = 0; e < dom.n_edges(); ++e)
    fd.edge_member[e] = edge_free(e) && fd.member[dom.site_index(dom.edge(e).a)] &&
                        fd.member[dom.site_index(dom.edge(e).b)];
  for (int s = 0; s < dom.n_sites(); ++s)
    if (fd.member[s]) fd.sites.push_back(s);

  // marked vertices and their wiring partition from annulus connections
  std::vector<int> block_of_root(dom.n_sites() + 1, -1);
  int n_blocks = 0;
  for (int s = 0; s < dom.n_sites(); ++s) {
    Point p = dom.site_at(s);
    if (linf(p) == m && in_C[s]) {
      fd.marked.push_back(p);
      int r = reach.uf.find(s);
      if (block_of_root[r] < 0) block_of_root[r] = n_blocks++;
      fd.wiring.push_back(block_of_root[r]);
    }
  }
  return fd;
}

std::optional<int> scale_M(const BondConfig& bonds, const Domain& dom, int M) {
  if (M < 1) throw std::invalid_argument("scale_M: need M >= 1");
  std::vector<int> counts = marked_counts_all_scales(bonds, dom);
  for (int m = dom.radius() - 1; m >= 1; --m)
    if (counts[m] <= M) return m;
  return std::nullopt;
}

namespace {

// generic winding detector over an edge list with planar positions
struct WindingGraph {
  std::vector<Vec2> pos;                   // per node, never the origin
  std::vector<std::vector<int>> adjacency;  // node -> neighbor nodes
};

bool has_winding_cluster(const WindingGraph& g) {
  const int n = static_cast<int>(g.pos.size());
  std::vector<double> lift(n, 0.0);
  std::vector<std::uint8_t> visited(n, 0);
  std::vector<int> stack;
  auto angle = [&](int v) { return std::atan2(g.pos[v][1], g.pos[v][0]); };
  for (int s = 0; s < n; ++s) {
    if (visited[s] || g.adjacency[s].empty()) continue;
    visited[s] = 1;
    lift[s] = angle(s);
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : g.adjacency[u]) {
        double delta = angle(v) - angle(u);
        if (delta > M_PI) delta -= 2.0 * M_PI;
        if (delta < -M_PI) delta += 2.0 * M_PI;
        double proposed = lift[u] + delta;
        if (!visited[v]) {
          visited[v] = 1;
          lift[v] = proposed;
          stack.push_back(v);
        } else if (std::abs(lift[v] - proposed) > M_PI) {
          return true;  // non-trivial cycle around the origin
        }
      }
    }
  }
  return false;
}

}  // namespace

bool detect_crossing(const BondConfig& bonds, const Domain& dom, const Annulus& ann) {
  UnionFind uf(dom.n_sites());
  for (int e : ann.edge_ids)
    if (bonds.is_open(e)) uf.merge(dom.site_index(dom.edge(e).a), dom.site_index(dom.edge(e).b));
  std::vector<std::uint8_t> inner(dom.n_sites(), 0), outer(dom.n_sites(), 0);
  bool found = false;
  for (int s = 0; s < dom.n_sites() && !found; ++s) {
    Point p = dom.site_at(s);
    int r = uf.find(s);
    if (linf(p) <= ann.m) {
      inner[r] = 1;
      if (outer[r]) found = true;
    }
    if (linf(p) == ann.n) {
      outer[r] = 1;
      if (inner[r]) found = true;
    }
  }
  return found;
}

bool detect_circuit(const BondConfig& bonds, const Domain& dom, const Annulus& ann) {
  if (ann.m < 1) throw std::invalid_argument("detect_circuit: inner radius must be >= 1");
  // nodes = sites touched by open annulus edges
  std::vector<int> node_of(dom.n_sites(), -1);
  WindingGraph g;
  auto node = [&](int s) {
    if (node_of[s] < 0) {
      node_of[s] = static_cast<int>(g.pos.size());
      Point p = dom.site_at(s);
      g.pos.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
      g.adjacency.emplace_back();
    }
    return node_of[s];
  };
  for (int e : ann.edge_ids) {
    if (!bonds.is_open(e)) continue;
    int a = node(dom.site_index(dom.edge(e).a));
    int b = node(dom.site_index(dom.edge(e).b));
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
  }
  return has_winding_cluster(g);
}

bool detect_crossing_dual(const BondConfig& dual_bonds, const Domain& dom, const Annulus& ann) {
  DualDomain dd(dom.radius());
  UnionFind uf(dd.n_sites());
  for (int e : ann.edge_ids) {
    if (!dual_bonds.is_open(e)) continue;
    auto [fa, fb] = dd.edge_faces(e);
    uf.merge(fa, fb);
  }
  const int in_l = 2 * ann.m + 1, out_l = 2 * ann.n + 1;
  std::vector<std::uint8_t> inner(dd.n_sites(), 0), outer(dd.n_sites(), 0);
  bool found = false;
  std::vector<std::uint8_t> active(dd.n_sites(), 0);
  for (int e : ann.edge_ids) {
    if (!dual_bonds.is_open(e)) continue;
    auto [fa, fb] = dd.edge_faces(e);
    active[fa] = active[fb] = 1;
  }
  for (int f = 0; f < dd.n_sites() && !found; ++f) {
    if (!active[f]) continue;
    int l = linf(dd.doubled(f));
    int r = uf.find(f);
    if (l <= in_l) {
      inner[r] = 1;
      if (outer[r]) found = true;
    }
    if (l == out_l) {
      outer[r] = 1;
      if (inner[r]) found = true;
    }
  }
  return found;
}

bool detect_circuit_dual(const BondConfig& dual_bonds, const Domain& dom, const Annulus& ann) {
  DualDomain dd(dom.radius());
  std::vector<int> node_of(dd.n_sites(), -1);
  WindingGraph g;
  auto node = [&](int f) {
    if (node_of[f] < 0) {
      node_of[f] = static_cast<int>(g.pos.size());
      Point p = dd.doubled(f);
      g.pos.push_back({0.5 * p.x, 0.5 * p.y});
      g.adjacency.emplace_back();
    }
    return node_of[f];
  };
  for (int e : ann.edge_ids) {
    if (!dual_bonds.is_open(e)) continue;
    auto [fa, fb] = dd.edge_faces(e);
    int a = node(fa), b = node(fb);
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
  }
  return has_winding_cluster(g);
}

EventClass classify_event(const BondConfig& primal, const Domain& dom, const DualDomain& dd,
                          const std::vector<int>& sigma, double eps) {
  const int n = dom.radius();
  int inner = 2 * static_cast<int>(std::ceil(std::pow(n, eps)));
  inner = std::min(inner, n - 1);
  if (inner < 1) inner = 1;
  Annulus ann = make_annulus(dom, inner);
  if (detect_crossing(primal, dom, ann)) return {EventClass::Tag::crossing, -1};

  // dual connection from the central dual box to the boundary classes; an
  // unreachable ring means the center sits inside an open circuit, which is
  // the free case
  BondConfig dual = primal.lattice == LatticeTag::dual ? primal : dual_config(primal);
  UnionFind uf(dd.n_sites());
  for (int e = 0; e < dd.n_edges(); ++e) {
    if (!dual.is_open(e)) continue;
    auto [fa, fb] = dd.edge_faces(e);
    uf.merge(fa, fb);
  }
  std::vector<std::uint8_t> central(dd.n_sites(), 0);
  for (int f = 0; f < dd.n_sites(); ++f)
    if (linf(dd.doubled(f)) <= 2 * inner - 1) central[uf.find(f)] = 1;
  const auto& ring = dd.ring();
  int color = -1;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (sigma[i] < 0) continue;
    if (!central[uf.find(ring[i])]) continue;
    if (color < 0)
      color = sigma[i];
    else if (color != sigma[i])
      throw EventCondViolation{};
  }
  if (color < 0) return {EventClass::Tag::free_circuit, -1};
  return {EventClass::Tag::pure, color};
}

namespace {

// exact segment-box test: does [a,b] meet [-k/2, k/2]^2? Evaluated in
// doubled coordinates with integer arithmetic (Liang-Barsky interval clip).
bool segment_meets_box(Point a, Point b, int k) {
  const long long x0 = 2ll * a.x, y0 = 2ll * a.y;
  const long long dx = 2ll * (b.x - a.x), dy = 2ll * (b.y - a.y);
  const long long half = k;
  // t in [lo_n/lo_d, hi_n/hi_d] with positive denominators
  long long lo_n = 0, lo_d = 1, hi_n = 1, hi_d = 1;
  auto clip = [&](long long p, long long q) {
    // constraint p * t <= q; fractions kept with positive denominators
    if (p == 0) return q >= 0;
    if (p > 0) {  // t <= q/p
      if (q * hi_d < hi_n * p) {
        hi_n = q;
        hi_d = p;
      }
    } else {  // t >= q/p = (-q)/(-p)
      if (-q * lo_d > lo_n * -p) {
        lo_n = -q;
        lo_d = -p;
      }
    }
    return true;
  };
  // -half <= x0 + t dx <= half  and same for y
  if (!clip(dx, half - x0)) return false;
  if (!clip(-dx, half + x0)) return false;
  if (!clip(dy, half - y0)) return false;
  if (!clip(-dy, half + y0)) return false;
  return lo_n * hi_d <= hi_n * lo_d;
}

}  // namespace

StructureClass classify_structure(const BondConfig& bonds, const Domain& dom, int k, double nu,
                                  const GaugeNorm& norm) {
  StructureClass sc;
  AnnulusReach reach(bonds, dom, k);
  std::vector<Point> marked;
  std::vector<int> roots;
  const int n = dom.radius();
  if (k <= 0 || k >= n) throw std::invalid_argument("classify_structure: need 0 < k < n");
  for (int s = 0; s < dom.n_sites(); ++s) {
    Point p = dom.site_at(s);
    if (linf(p) == k && reach.in_C(s)) {
      marked.push_back(p);
      roots.push_back(reach.uf.find(s));
    }
  }
  if (marked.empty()) {
    sc.tag = StructureClass::Tag::S1;
    return sc;
  }
  // groups = annulus components carrying marked vertices
  std::vector<int> group_root;
  for (std::size_t i = 0; i < marked.size(); ++i) {
    int g = -1;
    for (std::size_t j = 0; j < group_root.size(); ++j)
      if (group_root[j] == roots[i]) g = static_cast<int>(j);
    if (g < 0) {
      group_root.push_back(roots[i]);
      sc.groups.emplace_back();
      g = static_cast<int>(sc.groups.size()) - 1;
    }
    sc.groups[g].push_back(marked[i]);
  }
  const std::size_t ngroups = sc.groups.size();
  if (ngroups != 2 && ngroups != 3) return sc;  // none

  // tau-diameter threshold with the norm's relative error folded in
  double rel_err = 0.0;
  for (const auto& d : norm.direction_table)
    if (d.tau > 0) rel_err = std::max(rel_err, d.err / d.tau);
  const double diam_cap = nu * k * (1.0 + rel_err);
  for (const auto& g : sc.groups) {
    double diam = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = a + 1; b < g.size(); ++b)
        diam = std::max(diam, norm(g[a] - g[b]));
    if (diam > diam_cap) return sc;  // none
  }

  if (ngroups == 2) {
    for (Point va : sc.groups[0])
      for (Point vb : sc.groups[1])
        if (!segment_meets_box(va, vb, k)) return sc;  // none
    sc.tag = StructureClass::Tag::S2;
    return sc;
  }
  for (Point v1 : sc.groups[0])
    for (Point v2 : sc.groups[1])
      for (Point v3 : sc.groups[2]) {
        auto sol = steiner::solve_tripod({double(v1.x), double(v1.y)},
                                         {double(v2.x), double(v2.y)},
                                         {double(v3.x), double(v3.y)}, norm);
        if (sol.degenerate) return sc;  // none
        if (std::max(std::abs(sol.junction[0]), std::abs(sol.junction[1])) > k / 2.0)
          return sc;  // none
      }
  sc.tag = StructureClass::Tag::S3;
  return sc;
}

AlphaEstimate estimate_alpha(const std::vector<EventClass>& events, int q) {
  if (events.empty()) throw std::invalid_argument("estimate_alpha: empty sample list");
  AlphaEstimate a;
  a.alpha.assign(q, 0.0);
  double circuit = 0.0, crossing = 0.0;
  for (const EventClass& e : events) {
    switch (e.tag) {
      case EventClass::Tag::crossing: crossing += 1.0; break;
      case EventClass::Tag::free_circuit: circuit += 1.0; break;
      case EventClass::Tag::pure: a.alpha[e.color] += 1.0; break;
    }
  }
  const double n = static_cast<double>(events.size());
  for (double& x : a.alpha) x = x / n;
  circuit /= n;
  a.crossing_freq = crossing / n;
  for (double& x : a.alpha) x += circuit / q;
  return a;
}

}  // namespace potts
