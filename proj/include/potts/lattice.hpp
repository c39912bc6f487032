#ifndef POTTS_LATTICE_HPP
#define POTTS_LATTICE_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace potts {

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }

// Row-major order: by y, then x. Site/edge indices and every "minimal
// vertex" tie-break in the skeleton construction use this order.
inline bool lex_less(Point a, Point b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

inline int linf(Point p) {
  int ax = p.x < 0 ? -p.x : p.x;
  int ay = p.y < 0 ? -p.y : p.y;
  return ax > ay ? ax : ay;
}

struct PointHash {
  std::size_t operator()(const Point& p) const {
    std::uint64_t z = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
                      static_cast<std::uint32_t>(p.y);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};

struct Edge {
  Point a, b;  // a precedes b in row-major order
  friend bool operator==(const Edge&, const Edge&) = default;
};

// The box Lambda_n = Z^2 cap [-n,n]^2 with its nearest-neighbor edge set E_n.
// Sites are indexed row-major; edges horizontal-first, each block row-major.
class Domain {
 public:
  explicit Domain(int n);

  int radius() const { return n_; }
  int side() const { return 2 * n_ + 1; }
  int n_sites() const { return side() * side(); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  bool contains(Point p) const { return linf(p) <= n_; }
  int site_index(Point p) const { return (p.y + n_) * side() + (p.x + n_); }
  Point site_at(int idx) const {
    return {idx % side() - n_, idx / side() - n_};
  }

  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  // index of the edge {a,b}; throws if not an edge of E_n
  int edge_index(Point a, Point b) const;

  // up to 4 incident edge ids for a site
  const int* incident_edges(int site, int& count) const {
    count = inc_count_[site];
    return &inc_[4 * site];
  }
  // endpoint of edge e opposite to site
  int neighbor_via(int site, int e) const {
    int ia = site_index(edges_[e].a);
    return ia == site ? site_index(edges_[e].b) : ia;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<int> inc_;        // 4 slots per site
  std::vector<std::uint8_t> inc_count_;
};

// Dual lattice of the box: one site per face of Z^2 in [-n-1,n] x [-n-1,n]
// (including the ring of outer faces), edges E_n^* sharing indices with E_n.
// Coordinates are stored doubled so that the dual site of face (a,b), the
// point (a+1/2, b+1/2), is the exact integer pair (2a+1, 2b+1).
class DualDomain {
 public:
  explicit DualDomain(int n);

  int radius() const { return n_; }
  int side() const { return 2 * n_ + 2; }
  int n_sites() const { return side() * side(); }
  int n_edges() const { return 2 * (2 * n_) * (2 * n_ + 1); }

  // faces are addressed by their lower-left primal corner (a,b)
  int face_index(int a, int b) const {
    return (b + n_ + 1) * side() + (a + n_ + 1);
  }
  std::pair<int, int> face_at(int idx) const {
    return {idx % side() - n_ - 1, idx / side() - n_ - 1};
  }
  Point doubled(int idx) const {
    auto [a, b] = face_at(idx);
    return {2 * a + 1, 2 * b + 1};
  }

  // endpoints (face indices) of the dual edge with shared id e
  std::pair<int, int> edge_faces(int e) const { return edge_faces_[e]; }

  // incident dual edges of a face (0 for the four corner faces)
  const int* incident_edges(int face, int& count) const {
    count = inc_count_[face];
    return &inc_[4 * face];
  }

  bool is_interior(int face) const {
    auto [a, b] = face_at(face);
    return a >= -n_ && a < n_ && b >= -n_ && b < n_;
  }
  bool is_corner(int face) const {
    auto [a, b] = face_at(face);
    return (a == -n_ - 1 || a == n_) && (b == -n_ - 1 || b == n_);
  }
  // boundary ring partial Lambda_n^*: the 8n sigma-carrying sites, listed in
  // counterclockwise cyclic order starting just above angle -pi
  const std::vector<int>& ring() const { return ring_; }

 private:
  int n_;
  std::vector<std::pair<int, int>> edge_faces_;
  std::vector<int> inc_;
  std::vector<std::uint8_t> inc_count_;
  std::vector<int> ring_;
};

// dual edge of primal edge e, as a doubled-coordinate point pair
std::pair<Point, Point> dual_edge(const Domain& dom, int e);
// inverse map: primal edge id of a doubled-coordinate dual edge
int primal_edge(const Domain& dom, Point da, Point db);

// Edges of E_n not inside Lambda_m (edge ids relative to the outer Domain).
struct Annulus {
  int m = 0;
  int n = 0;
  std::vector<int> edge_ids;
};
Annulus make_annulus(const Domain& dom, int m);

// Vertex boundary, exterior vertex boundary and edge boundary of a finite
// site set, with Z^2 adjacency. All throw on empty input; results sorted
// row-major.
std::vector<Point> vertex_boundary(const std::vector<Point>& v);
std::vector<Point> exterior_vertex_boundary(const std::vector<Point>& v);
std::vector<Edge> edge_boundary(const std::vector<Point>& v);

std::vector<Point> box_sites(int m);  // all sites of Lambda_m, row-major

}  // namespace potts

#endif
