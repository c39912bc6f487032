#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "potts/bonds.hpp"
#include "potts/lattice.hpp"
#include "potts/rng.hpp"

using namespace potts;

TEST_CASE("box site and edge counts") {
  Domain d0(0);
  CHECK(d0.n_sites() == 1);
  CHECK(d0.n_edges() == 0);
  Domain d1(1);
  CHECK(d1.n_sites() == 9);
  CHECK(d1.n_edges() == 12);
  Domain d2(2);
  CHECK(d2.n_sites() == 25);
  CHECK(d2.n_edges() == 40);
  for (int n = 0; n <= 64; ++n) {
    Domain d(n);
    CHECK(d.n_sites() == (2 * n + 1) * (2 * n + 1));
    CHECK(d.n_edges() == 2 * (2 * n) * (2 * n + 1));
  }
}

TEST_CASE("every edge joins sites at distance 1") {
  Domain d(3);
  for (int e = 0; e < d.n_edges(); ++e) {
    Point diff = d.edge(e).b - d.edge(e).a;
    CHECK(std::abs(diff.x) + std::abs(diff.y) == 1);
  }
}

TEST_CASE("site indexing is row-major and invertible") {
  Domain d(2);
  int prev = -1;
  for (int y = -2; y <= 2; ++y)
    for (int x = -2; x <= 2; ++x) {
      int idx = d.site_index({x, y});
      CHECK(idx == prev + 1);
      prev = idx;
      CHECK(d.site_at(idx) == Point{x, y});
    }
}

TEST_CASE("dual edge of ((0,0),(1,0))") {
  Domain d(2);
  int e = d.edge_index({0, 0}, {1, 0});
  auto [a, b] = dual_edge(d, e);
  // ((1/2,-1/2),(1/2,1/2)) in doubled coordinates
  CHECK(a == Point{1, -1});
  CHECK(b == Point{1, 1});
}

TEST_CASE("dual_edge is a bijection with exact inverse") {
  Domain d(1);
  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> images;
  for (int e = 0; e < d.n_edges(); ++e) {
    auto [a, b] = dual_edge(d, e);
    images.insert({{a.x, a.y}, {b.x, b.y}});
    CHECK(primal_edge(d, a, b) == e);
  }
  CHECK(static_cast<int>(images.size()) == d.n_edges());
  CHECK_THROWS_AS(dual_edge(d, d.n_edges()), std::out_of_range);
}

TEST_CASE("dual domain structure") {
  DualDomain dd(2);
  CHECK(dd.n_sites() == 36);
  CHECK(dd.n_edges() == Domain(2).n_edges());
  CHECK(static_cast<int>(dd.ring().size()) == 8 * 2);
  int interior = 0, corners = 0;
  for (int f = 0; f < dd.n_sites(); ++f) {
    interior += dd.is_interior(f);
    corners += dd.is_corner(f);
  }
  CHECK(interior == 16);
  CHECK(corners == 4);
  // shared edge ids: the faces of dual edge e are the endpoints of
  // dual_edge(e) in doubled coordinates
  Domain d(2);
  for (int e = 0; e < d.n_edges(); ++e) {
    auto [fa, fb] = dd.edge_faces(e);
    auto [pa, pb] = dual_edge(d, e);
    Point da = dd.doubled(fa), db = dd.doubled(fb);
    bool match = (da == pa && db == pb) || (da == pb && db == pa);
    CHECK(match);
  }
}

TEST_CASE("ring is cyclically ordered and sigma-adjacent to the interior") {
  DualDomain dd(3);
  const auto& ring = dd.ring();
  for (int f : ring) {
    int cnt;
    dd.incident_edges(f, cnt);
    CHECK(cnt == 1);  // exactly one inward dual edge
  }
  // consecutive ring sites are at doubled L1 distance 2 or 4 (corner turn)
  for (std::size_t i = 0; i < ring.size(); ++i) {
    Point a = dd.doubled(ring[i]);
    Point b = dd.doubled(ring[(i + 1) % ring.size()]);
    int l1 = std::abs(a.x - b.x) + std::abs(a.y - b.y);
    CHECK((l1 == 2 || l1 == 4));
  }
}

TEST_CASE("annulus holds exactly the edges of E_n not inside Lambda_m") {
  Domain d(4);
  Annulus a = make_annulus(d, 2);
  std::set<int> ann(a.edge_ids.begin(), a.edge_ids.end());
  for (int e = 0; e < d.n_edges(); ++e) {
    bool inside = linf(d.edge(e).a) <= 2 && linf(d.edge(e).b) <= 2;
    CHECK(ann.count(e) == (inside ? 0u : 1u));
  }
  CHECK_THROWS(make_annulus(d, 4));
}

TEST_CASE("vertex boundary of Lambda_1") {
  auto v = box_sites(1);
  auto bd = vertex_boundary(v);
  CHECK(bd.size() == 8);
  for (Point p : bd) CHECK(!(p == Point{0, 0}));
}

TEST_CASE("boundaries of a single site") {
  std::vector<Point> v{{3, 4}};
  auto bd = vertex_boundary(v);
  REQUIRE(bd.size() == 1);
  CHECK(bd[0] == Point{3, 4});
  auto ext = exterior_vertex_boundary(v);
  CHECK(ext.size() == 4);
}

TEST_CASE("edge boundary of Lambda_2 is the 16 perimeter edges") {
  auto v = box_sites(2);
  auto eb = edge_boundary(v);
  CHECK(eb.size() == 16);
}

TEST_CASE("boundary set relations on random site sets") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> v;
    std::set<std::pair<int, int>> used;
    int count = 1 + static_cast<int>(rng.below(20));
    while (static_cast<int>(v.size()) < count) {
      Point p{static_cast<int>(rng.below(9)) - 4, static_cast<int>(rng.below(9)) - 4};
      if (used.insert({p.x, p.y}).second) v.push_back(p);
    }
    auto inside = [&](Point p) { return used.count({p.x, p.y}) > 0; };
    for (Point p : vertex_boundary(v)) CHECK(inside(p));
    for (Point p : exterior_vertex_boundary(v)) CHECK(!inside(p));
    auto bd = vertex_boundary(v);
    std::set<std::pair<int, int>> bset;
    for (Point p : bd) bset.insert({p.x, p.y});
    for (const Edge& e : edge_boundary(v)) {
      CHECK(bset.count({e.a.x, e.a.y}) == 1);
      CHECK(bset.count({e.b.x, e.b.y}) == 1);
    }
  }
  CHECK_THROWS_AS(vertex_boundary({}), std::invalid_argument);
}

TEST_CASE("dual_config is an involution and complements counts") {
  SplitMix64 rng(11);
  BondConfig bc = BondConfig::all(2, LatticeTag::primal, WiringTag::free_bc, false);
  for (auto& b : bc.open) b = rng.below(2);
  BondConfig dual = dual_config(bc);
  CHECK(dual.lattice == LatticeTag::dual);
  CHECK(dual.wiring == WiringTag::wired_bc);
  CHECK(bc.open_count() + dual.open_count() == static_cast<int>(bc.open.size()));
  BondConfig back = dual_config(dual);
  CHECK(back.open == bc.open);
  CHECK(back.lattice == LatticeTag::primal);
}

TEST_CASE("all-open maps to all-closed on the dual") {
  BondConfig bc = BondConfig::all(1, LatticeTag::primal, WiringTag::free_bc, true);
  CHECK(dual_config(bc).open_count() == 0);
}

TEST_CASE("sample dump round-trips byte-exactly") {
  SplitMix64 rng(23);
  BondConfig bc = BondConfig::all(2, LatticeTag::primal, WiringTag::free_bc, false);
  for (auto& b : bc.open) b = rng.below(2);
  SampleHeader h;
  h.n = 2;
  h.q = 3;
  h.beta = 1.25;
  h.bc_descriptor = "dobrushin";
  h.seed = 0xDEADBEEF;
  h.sample_index = 17;
  std::stringstream ss;
  write_sample(ss, h, bc);
  std::string bytes = ss.str();
  // size: magic + n,q + beta + tags + len + descriptor + seed + index + ne + mask
  CHECK(bytes.size() == 4 + 8 + 8 + 2 + 4 + 9 + 16 + 4 + (40 + 7) / 8);
  SampleHeader h2;
  BondConfig bc2 = read_sample(ss, h2);
  CHECK(h2.n == h.n);
  CHECK(h2.beta == h.beta);
  CHECK(h2.bc_descriptor == h.bc_descriptor);
  CHECK(h2.seed == h.seed);
  CHECK(bc2.open == bc.open);
  std::stringstream ss2;
  write_sample(ss2, h2, bc2);
  CHECK(ss2.str() == bytes);
}
