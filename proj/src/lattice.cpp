#include "potts/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace potts {

Domain::Domain(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("Domain: n must be >= 0");
  const int s = side();
  edges_.reserve(static_cast<std::size_t>(2 * (2 * n) * (2 * n + 1)));
  // horizontal block, then vertical block, each row-major
  for (int y = -n; y <= n; ++y)
    for (int x = -n; x < n; ++x) edges_.push_back({{x, y}, {x + 1, y}});
  for (int y = -n; y < n; ++y)
    for (int x = -n; x <= n; ++x) edges_.push_back({{x, y}, {x, y + 1}});

  inc_.assign(static_cast<std::size_t>(4) * s * s, -1);
  inc_count_.assign(static_cast<std::size_t>(s) * s, 0);
  for (int e = 0; e < n_edges(); ++e) {
    for (Point p : {edges_[e].a, edges_[e].b}) {
      int i = site_index(p);
      inc_[4 * i + inc_count_[i]++] = e;
    }
  }
}

int Domain::edge_index(Point a, Point b) const {
  if (lex_less(b, a)) std::swap(a, b);
  if (!contains(a) || !contains(b))
    throw std::out_of_range("edge_index: endpoint outside box");
  if (b.x == a.x + 1 && b.y == a.y)
    return (a.y + n_) * (2 * n_) + (a.x + n_);
  if (b.x == a.x && b.y == a.y + 1)
    return 2 * n_ * (2 * n_ + 1) + (a.y + n_) * (2 * n_ + 1) + (a.x + n_);
  throw std::out_of_range("edge_index: not a nearest-neighbor pair");
}

DualDomain::DualDomain(int n) : n_(n) {
  Domain dom(n);
  edge_faces_.resize(dom.n_edges());
  inc_.assign(static_cast<std::size_t>(4) * n_sites(), -1);
  inc_count_.assign(n_sites(), 0);
  for (int e = 0; e < dom.n_edges(); ++e) {
    const Edge& pe = dom.edge(e);
    int fa, fb;
    if (pe.b.x == pe.a.x + 1) {  // horizontal primal -> vertical dual
      fa = face_index(pe.a.x, pe.a.y - 1);
      fb = face_index(pe.a.x, pe.a.y);
    } else {  // vertical primal -> horizontal dual
      fa = face_index(pe.a.x - 1, pe.a.y);
      fb = face_index(pe.a.x, pe.a.y);
    }
    edge_faces_[e] = {fa, fb};
    inc_[4 * fa + inc_count_[fa]++] = e;
    inc_[4 * fb + inc_count_[fb]++] = e;
  }
  // ring sites sorted counterclockwise by angle
  std::vector<std::pair<double, int>> ring;
  for (int f = 0; f < n_sites(); ++f) {
    if (!is_interior(f) && !is_corner(f)) {
      Point d = doubled(f);
      ring.emplace_back(std::atan2(static_cast<double>(d.y), static_cast<double>(d.x)), f);
    }
  }
  std::sort(ring.begin(), ring.end());
  ring_.reserve(ring.size());
  for (auto& [ang, f] : ring) ring_.push_back(f);
}

std::pair<Point, Point> dual_edge(const Domain& dom, int e) {
  if (e < 0 || e >= dom.n_edges()) throw std::out_of_range("dual_edge: bad edge index");
  const Edge& pe = dom.edge(e);
  Point a2{2 * pe.a.x, 2 * pe.a.y};
  if (pe.b.x == pe.a.x + 1)  // horizontal -> vertical dual edge at x+1/2
    return {Point{a2.x + 1, a2.y - 1}, Point{a2.x + 1, a2.y + 1}};
  return {Point{a2.x - 1, a2.y + 1}, Point{a2.x + 1, a2.y + 1}};
}

int primal_edge(const Domain& dom, Point da, Point db) {
  if (lex_less(db, da)) std::swap(da, db);
  // vertical dual edge (da.x == db.x) crosses a horizontal primal edge
  if (da.x == db.x && db.y == da.y + 2) {
    Point pa{(da.x - 1) / 2, (da.y + 1) / 2};
    return dom.edge_index(pa, {pa.x + 1, pa.y});
  }
  if (da.y == db.y && db.x == da.x + 2) {
    Point pa{(da.x + 1) / 2, (da.y - 1) / 2};
    return dom.edge_index(pa, {pa.x, pa.y + 1});
  }
  throw std::out_of_range("primal_edge: not a dual nearest-neighbor pair");
}

Annulus make_annulus(const Domain& dom, int m) {
  if (m < 0 || m >= dom.radius())
    throw std::invalid_argument("make_annulus: need 0 <= m < n");
  Annulus a;
  a.m = m;
  a.n = dom.radius();
  for (int e = 0; e < dom.n_edges(); ++e) {
    const Edge& pe = dom.edge(e);
    if (linf(pe.a) > m || linf(pe.b) > m) a.edge_ids.push_back(e);
  }
  return a;
}

namespace {
const Point kSteps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

std::unordered_set<Point, PointHash> to_set(const std::vector<Point>& v) {
  if (v.empty()) throw std::invalid_argument("boundary op: empty site set");
  return {v.begin(), v.end()};
}

void sort_points(std::vector<Point>& v) {
  std::sort(v.begin(), v.end(), lex_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}
}  // namespace

std::vector<Point> vertex_boundary(const std::vector<Point>& v) {
  auto set = to_set(v);
  std::vector<Point> out;
  for (Point p : set) {
    for (Point s : kSteps) {
      if (!set.count(p + s)) {
        out.push_back(p);
        break;
      }
    }
  }
  sort_points(out);
  return out;
}

std::vector<Point> exterior_vertex_boundary(const std::vector<Point>& v) {
  auto set = to_set(v);
  std::vector<Point> out;
  for (Point p : set)
    for (Point s : kSteps)
      if (!set.count(p + s)) out.push_back(p + s);
  sort_points(out);
  return out;
}

std::vector<Edge> edge_boundary(const std::vector<Point>& v) {
  auto bd = vertex_boundary(v);
  std::unordered_set<Point, PointHash> bset(bd.begin(), bd.end());
  std::vector<Edge> out;
  for (Point p : bd) {
    for (Point s : {Point{1, 0}, Point{0, 1}}) {  // each pair once
      Point q = p + s;
      if (bset.count(q)) out.push_back({p, q});
    }
  }
  return out;
}

std::vector<Point> box_sites(int m) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(2 * m + 1) * (2 * m + 1));
  for (int y = -m; y <= m; ++y)
    for (int x = -m; x <= m; ++x) out.push_back({x, y});
  return out;
}

}  // namespace potts
