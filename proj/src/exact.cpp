#include "potts/exact.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "potts/lattice.hpp"
#include "potts/unionfind.hpp"

namespace potts::oracle {

int TinyGraph::n_free() const {
  int c = 0;
  for (int f : frozen) c += (f < 0);
  return c;
}

void TinyGraph::validate() const {
  if (n_vertices > 14) throw std::invalid_argument("TinyGraph: more than 14 vertices");
  if (edges.size() > 16) throw std::invalid_argument("TinyGraph: more than 16 edges");
  if (static_cast<int>(frozen.size()) != n_vertices ||
      static_cast<int>(wired.size()) != n_vertices)
    throw std::invalid_argument("TinyGraph: boundary arrays not sized");
}

namespace {
TinyGraph bare(std::string name, int nv) {
  TinyGraph g;
  g.name = std::move(name);
  g.n_vertices = nv;
  g.frozen.assign(nv, -1);
  g.wired.assign(nv, 0);
  return g;
}
}  // namespace

TinyGraph single_edge() {
  TinyGraph g = bare("single-edge", 2);
  g.edges = {{0, 1}};
  return g;
}

TinyGraph path_graph(int k) {
  TinyGraph g = bare("path-" + std::to_string(k), k);
  for (int i = 0; i + 1 < k; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

TinyGraph grid_graph(int w, int h) {
  TinyGraph g = bare("grid-" + std::to_string(w) + "x" + std::to_string(h), w * h);
  auto vid = [w](int x, int y) { return y * w + x; };
  // horizontal block then vertical block, row-major, like Domain
  for (int y = 0; y < h; ++y)
    for (int x = 0; x + 1 < w; ++x) g.edges.emplace_back(vid(x, y), vid(x + 1, y));
  for (int y = 0; y + 1 < h; ++y)
    for (int x = 0; x < w; ++x) g.edges.emplace_back(vid(x, y), vid(x, y + 1));

  TinyGraph::Dual dual;
  const int fw = w - 1, fh = h - 1;
  dual.n_vertices = fw * fh + 1;
  dual.ghost = fw * fh;
  auto fid = [&](int a, int b) {
    return (a < 0 || a >= fw || b < 0 || b >= fh) ? dual.ghost : b * fw + a;
  };
  for (auto& [u, v] : g.edges) {
    int ux = u % w, uy = u / w, vx = v % w;
    if (vx == ux + 1)  // horizontal edge: faces below and above
      dual.edges.emplace_back(fid(ux, uy - 1), fid(ux, uy));
    else  // vertical edge: faces left and right
      dual.edges.emplace_back(fid(ux - 1, uy), fid(ux, uy));
  }
  g.dual = dual;
  return g;
}

TinyGraph box_graph(int m) {
  TinyGraph g = grid_graph(2 * m + 1, 2 * m + 1);
  g.name = "box-" + std::to_string(m);
  return g;
}

TinyGraph k4_graph() {
  TinyGraph g = bare("k4", 4);
  g.edges = {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 3}, {2, 3}};
  // faces: A=(0,1,3), B=(1,2,3), C=(0,2,3), outer O; dual is again K4
  TinyGraph::Dual dual;
  dual.n_vertices = 4;
  dual.ghost = 3;  // O
  constexpr int A = 0, B = 1, C = 2, O = 3;
  dual.edges = {{A, O}, {B, O}, {C, O}, {A, C}, {A, B}, {B, C}};
  g.dual = dual;
  return g;
}

TinyGraph grid_with_boundary(int w, int h, const std::vector<int>& pattern) {
  if (pattern.empty()) throw std::invalid_argument("grid_with_boundary: empty pattern");
  const int interior = w * h;
  const int ring = 2 * w + 2 * h;
  TinyGraph g = bare("grid-" + std::to_string(w) + "x" + std::to_string(h) + "-bc", interior + ring);
  auto vid = [w](int x, int y) { return y * w + x; };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x + 1 < w; ++x) g.edges.emplace_back(vid(x, y), vid(x + 1, y));
  for (int y = 0; y + 1 < h; ++y)
    for (int x = 0; x < w; ++x) g.edges.emplace_back(vid(x, y), vid(x, y + 1));
  // boundary ring, one site per interior perimeter contact, clockwise from
  // the bottom side
  int next = interior;
  std::vector<std::pair<int, int>> contacts;
  for (int x = 0; x < w; ++x) contacts.emplace_back(vid(x, 0), next++);
  for (int y = 0; y < h; ++y) contacts.emplace_back(vid(w - 1, y), next++);
  for (int x = w - 1; x >= 0; --x) contacts.emplace_back(vid(x, h - 1), next++);
  for (int y = h - 1; y >= 0; --y) contacts.emplace_back(vid(0, y), next++);
  for (std::size_t i = 0; i < contacts.size(); ++i) {
    auto [in, out] = contacts[i];
    g.edges.emplace_back(in, out);
    g.frozen[out] = pattern[i % pattern.size()];
  }
  return g;
}

std::vector<TinyGraph> bundled_graphs() {
  std::vector<TinyGraph> out;
  out.push_back(single_edge());
  out.push_back(path_graph(3));
  out.push_back(grid_graph(2, 2));
  out.push_back(grid_graph(3, 2));
  out.push_back(box_graph(1));
  out.push_back(k4_graph());
  out.push_back(grid_with_boundary(2, 2, {0}));
  out.push_back(grid_with_boundary(2, 2, {0, 1}));
  TinyGraph p = path_graph(3);
  p.frozen = {0, -1, 1};
  p.name = "path-3-mixed";
  out.push_back(p);
  return out;
}

double ExactDistribution::total() const {
  double t = 0.0;
  for (double p : prob) t += p;
  return t;
}

namespace {

// components of the open subgraph; returns roots via UnionFind
void merge_open(const TinyGraph& g, std::uint32_t mask, UnionFind& uf) {
  uf.reset();
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (mask & (1u << e)) uf.merge(g.edges[e].first, g.edges[e].second);
}

struct PottsCodec {
  std::vector<int> free_vertices;
  int q = 2;
  std::uint64_t n_configs = 1;

  PottsCodec(const TinyGraph& g, int q_) : q(q_) {
    for (int v = 0; v < g.n_vertices; ++v)
      if (g.frozen[v] < 0) free_vertices.push_back(v);
    for (std::size_t i = 0; i < free_vertices.size(); ++i) n_configs *= q;
    if (n_configs > 10'000'000ull)
      throw std::invalid_argument("enumerate_potts: q^{free} exceeds cap");
  }
  void decode(std::uint64_t code, const TinyGraph& g, std::vector<int>& colors) const {
    colors.assign(g.frozen.begin(), g.frozen.end());
    for (int v : free_vertices) {
      colors[v] = static_cast<int>(code % q);
      code /= q;
    }
  }
  std::uint64_t encode(const std::vector<int>& colors) const {
    std::uint64_t code = 0;
    for (std::size_t i = free_vertices.size(); i-- > 0;)
      code = code * q + static_cast<std::uint64_t>(colors[free_vertices[i]]);
    return code;
  }
};

}  // namespace

ExactDistribution enumerate_fk(const TinyGraph& g, const FKParams& fk, const FKOptions& opt) {
  g.validate();
  fk.validate();
  const int ne = static_cast<int>(g.edges.size());
  const std::uint32_t n_masks = 1u << ne;
  ExactDistribution d;
  d.prob.assign(n_masks, 0.0);
  UnionFind uf(g.n_vertices);
  std::vector<int> root_class(g.n_vertices);
  for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
    merge_open(g, mask, uf);
    if (opt.condition_on_classes) {
      std::fill(root_class.begin(), root_class.end(), -1);
      bool ok = true;
      for (int v = 0; v < g.n_vertices && ok; ++v) {
        if (g.frozen[v] < 0) continue;
        int r = uf.find(v);
        if (root_class[r] >= 0 && root_class[r] != g.frozen[v]) ok = false;
        root_class[r] = g.frozen[v];
      }
      if (!ok) continue;
    }
    int k = 0;
    std::vector<std::uint8_t> seen(g.n_vertices, 0), touches(g.n_vertices, 0);
    if (opt.wired_counting) {
      for (int v = 0; v < g.n_vertices; ++v)
        if (g.is_boundary(v)) touches[uf.find(v)] = 1;
    }
    for (int v = 0; v < g.n_vertices; ++v) {
      int r = uf.find(v);
      if (!seen[r]) {
        seen[r] = 1;
        if (!touches[r]) ++k;
      }
    }
    int o = __builtin_popcount(mask);
    d.prob[mask] = std::pow(fk.p, o) * std::pow(1.0 - fk.p, ne - o) * std::pow(fk.q, k);
  }
  d.z = d.total();
  if (d.z <= 0.0) throw std::runtime_error("enumerate_fk: empty support");
  for (double& p : d.prob) p /= d.z;
  return d;
}

ExactDistribution enumerate_potts(const TinyGraph& g, const PottsParams& pp) {
  g.validate();
  pp.validate();
  PottsCodec codec(g, pp.q);
  ExactDistribution d;
  d.prob.assign(codec.n_configs, 0.0);
  std::vector<int> colors;
  for (std::uint64_t code = 0; code < codec.n_configs; ++code) {
    codec.decode(code, g, colors);
    int agree = 0;
    for (auto& [u, v] : g.edges) {
      if (g.frozen[u] >= 0 && g.frozen[v] >= 0) continue;
      agree += (colors[u] == colors[v]);
    }
    d.prob[code] = std::exp(pp.beta * agree);
  }
  d.z = d.total();
  for (double& p : d.prob) p /= d.z;
  return d;
}

namespace {

// exact Potts measure pushed through the edge rule
std::vector<double> push_spin_to_bond(const TinyGraph& g, const PottsParams& pp,
                                      const ExactDistribution& potts) {
  const int ne = static_cast<int>(g.edges.size());
  const double ps = 1.0 - std::exp(-pp.beta);
  PottsCodec codec(g, pp.q);
  std::vector<double> out(1u << ne, 0.0);
  std::vector<int> colors;
  for (std::uint64_t code = 0; code < codec.n_configs; ++code) {
    double pc = potts.prob[code];
    if (pc == 0.0) continue;
    codec.decode(code, g, colors);
    std::uint32_t agree_mask = 0;
    for (int e = 0; e < ne; ++e)
      if (colors[g.edges[e].first] == colors[g.edges[e].second]) agree_mask |= 1u << e;
    // open subsets of the agreeing edges
    std::uint32_t sub = agree_mask;
    while (true) {
      int o = __builtin_popcount(sub);
      int c = __builtin_popcount(agree_mask) - o;
      out[sub] += pc * std::pow(ps, o) * std::pow(1.0 - ps, c);
      if (sub == 0) break;
      sub = (sub - 1) & agree_mask;
    }
  }
  return out;
}

// exact FK measure pushed through cluster coloring
std::vector<double> push_bond_to_spin(const TinyGraph& g, const PottsParams& pp,
                                      const ExactDistribution& fkd) {
  PottsCodec codec(g, pp.q);
  std::vector<double> out(codec.n_configs, 0.0);
  UnionFind uf(g.n_vertices);
  const std::uint32_t n_masks = static_cast<std::uint32_t>(fkd.prob.size());
  std::vector<int> root_color(g.n_vertices);
  std::vector<int> free_roots;
  std::vector<int> colors(g.n_vertices);
  for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
    double pm = fkd.prob[mask];
    if (pm == 0.0) continue;
    merge_open(g, mask, uf);
    std::fill(root_color.begin(), root_color.end(), -1);
    for (int v = 0; v < g.n_vertices; ++v)
      if (g.frozen[v] >= 0) root_color[uf.find(v)] = g.frozen[v];
    free_roots.clear();
    for (int v = 0; v < g.n_vertices; ++v)
      if (uf.find(v) == v && root_color[v] < 0) free_roots.push_back(v);
    const int nf = static_cast<int>(free_roots.size());
    std::uint64_t n_assign = 1;
    for (int i = 0; i < nf; ++i) n_assign *= pp.q;
    const double w = pm / static_cast<double>(n_assign);
    for (std::uint64_t a = 0; a < n_assign; ++a) {
      std::uint64_t t = a;
      for (int i = 0; i < nf; ++i) {
        root_color[free_roots[i]] = static_cast<int>(t % pp.q);
        t /= pp.q;
      }
      for (int v = 0; v < g.n_vertices; ++v) colors[v] = root_color[uf.find(v)];
      out[codec.encode(colors)] += w;
    }
  }
  return out;
}

double tv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace

double check_es_identity(const TinyGraph& g, const PottsParams& pp) {
  FKParams fk{pp.p_dual(), static_cast<double>(pp.q)};
  if (fk.p <= 0.0) fk.p = 1e-300;  // beta = 0 degenerates to all-closed
  FKOptions opt;
  opt.wired_counting = std::any_of(g.frozen.begin(), g.frozen.end(), [](int f) { return f >= 0; });
  opt.condition_on_classes = true;
  ExactDistribution fkd = enumerate_fk(g, fk, opt);
  ExactDistribution potts = enumerate_potts(g, pp);
  double tv1 = tv(push_spin_to_bond(g, pp, potts), fkd.prob);
  double tv2 = tv(push_bond_to_spin(g, pp, fkd), potts.prob);
  return std::max(tv1, tv2);
}

double check_duality(const TinyGraph& g, const FKParams& fk) {
  if (!g.dual) throw std::invalid_argument("check_duality: graph carries no dual");
  TinyGraph dg = bare(g.name + "-dual", g.dual->n_vertices);
  dg.edges = g.dual->edges;
  dg.wired[g.dual->ghost] = 1;

  ExactDistribution primal = enumerate_fk(g, fk, {});
  ExactDistribution dual = enumerate_fk(dg, dual_params(fk), {true, false});

  const int ne = static_cast<int>(g.edges.size());
  const std::uint32_t full = (1u << ne) - 1;
  double worst = 0.0;
  for (std::uint32_t mask = 0; mask <= full; ++mask)
    worst = std::max(worst, std::abs(primal.prob[mask] - dual.prob[full & ~mask]));
  return worst;
}

double heat_bath_invariance_tv(const TinyGraph& g, const PottsParams& pp) {
  PottsCodec codec(g, pp.q);
  ExactDistribution pi = enumerate_potts(g, pp);
  std::vector<double> dist = pi.prob;
  std::vector<double> next(dist.size());
  std::vector<int> colors;
  for (int v : codec.free_vertices) {
    std::fill(next.begin(), next.end(), 0.0);
    // stride of vertex v in the mixed-radix code
    std::uint64_t stride = 1;
    for (int u : codec.free_vertices) {
      if (u == v) break;
      stride *= pp.q;
    }
    for (std::uint64_t code = 0; code < codec.n_configs; ++code) {
      double pc = dist[code];
      if (pc == 0.0) continue;
      codec.decode(code, g, colors);
      double w[16], total = 0.0;
      for (int c = 0; c < pp.q; ++c) {
        colors[v] = c;
        int agree = 0;
        for (auto& [a, b] : g.edges) {
          if (a != v && b != v) continue;
          int other = a == v ? b : a;
          agree += (colors[other] == c);
        }
        w[c] = std::exp(pp.beta * agree);
        total += w[c];
      }
      int cur = static_cast<int>((code / stride) % pp.q);
      std::uint64_t base = code - stride * cur;
      for (int c = 0; c < pp.q; ++c) next[base + stride * c] += pc * w[c] / total;
    }
    dist = next;
  }
  return tv(dist, pi.prob);
}

double cluster_invariance_tv(const TinyGraph& g, const PottsParams& pp) {
  PottsCodec codec(g, pp.q);
  ExactDistribution pi = enumerate_potts(g, pp);
  std::vector<double> next(pi.prob.size(), 0.0);
  const int ne = static_cast<int>(g.edges.size());
  const double ps = 1.0 - std::exp(-pp.beta);
  UnionFind uf(g.n_vertices);
  std::vector<int> colors, root_color(g.n_vertices), free_roots;
  std::vector<int> out_colors(g.n_vertices);
  for (std::uint64_t code = 0; code < codec.n_configs; ++code) {
    double pc = pi.prob[code];
    if (pc == 0.0) continue;
    codec.decode(code, g, colors);
    std::uint32_t agree_mask = 0;
    for (int e = 0; e < ne; ++e)
      if (colors[g.edges[e].first] == colors[g.edges[e].second]) agree_mask |= 1u << e;
    std::uint32_t sub = agree_mask;
    while (true) {
      int o = __builtin_popcount(sub);
      int c = __builtin_popcount(agree_mask) - o;
      double pb = pc * std::pow(ps, o) * std::pow(1.0 - ps, c);
      merge_open(g, sub, uf);
      std::fill(root_color.begin(), root_color.end(), -1);
      for (int v = 0; v < g.n_vertices; ++v)
        if (g.frozen[v] >= 0) root_color[uf.find(v)] = g.frozen[v];
      free_roots.clear();
      for (int v = 0; v < g.n_vertices; ++v)
        if (uf.find(v) == v && root_color[v] < 0) free_roots.push_back(v);
      const int nf = static_cast<int>(free_roots.size());
      std::uint64_t n_assign = 1;
      for (int i = 0; i < nf; ++i) n_assign *= pp.q;
      const double w = pb / static_cast<double>(n_assign);
      for (std::uint64_t a = 0; a < n_assign; ++a) {
        std::uint64_t t = a;
        for (int i = 0; i < nf; ++i) {
          root_color[free_roots[i]] = static_cast<int>(t % pp.q);
          t /= pp.q;
        }
        for (int v = 0; v < g.n_vertices; ++v) out_colors[v] = root_color[uf.find(v)];
        next[codec.encode(out_colors)] += w;
      }
      if (sub == 0) break;
      sub = (sub - 1) & agree_mask;
    }
  }
  return tv(next, pi.prob);
}

double free_energy_defect(const TinyGraph& g, const PottsParams& pp) {
  FKParams fk{pp.p_dual(), static_cast<double>(pp.q)};
  FKOptions opt;
  opt.wired_counting = std::any_of(g.frozen.begin(), g.frozen.end(), [](int f) { return f >= 0; });
  opt.condition_on_classes = true;
  // e^{-beta(|E| + #agreeing frozen pairs)} Z_potts = Z_fk
  int agree_ff = 0;
  for (auto& [u, v] : g.edges)
    if (g.frozen[u] >= 0 && g.frozen[v] >= 0 && g.frozen[u] == g.frozen[v]) ++agree_ff;
  double log_zp = std::log(enumerate_potts(g, pp).z);
  double log_zf = std::log(enumerate_fk(g, fk, opt).z);
  return std::abs(log_zp - pp.beta * (static_cast<double>(g.edges.size()) + agree_ff) - log_zf);
}

double potts_marginal(const TinyGraph& g, const ExactDistribution& d, int q, int vertex,
                      int color) {
  if (g.frozen[vertex] >= 0) return g.frozen[vertex] == color ? 1.0 : 0.0;
  PottsCodec codec(g, q);
  std::uint64_t stride = 1;
  for (int u : codec.free_vertices) {
    if (u == vertex) break;
    stride *= q;
  }
  double p = 0.0;
  for (std::uint64_t code = 0; code < codec.n_configs; ++code)
    if (static_cast<int>((code / stride) % q) == color) p += d.prob[code];
  return p;
}

std::vector<double> fk_edge_marginals(const ExactDistribution& d, int n_edges) {
  std::vector<double> out(n_edges, 0.0);
  for (std::uint32_t mask = 0; mask < d.prob.size(); ++mask) {
    if (d.prob[mask] == 0.0) continue;
    for (int e = 0; e < n_edges; ++e)
      if (mask & (1u << e)) out[e] += d.prob[mask];
  }
  return out;
}

std::vector<double> upset_probabilities(const ExactDistribution& d, int n_edges) {
  // superset-sum transform: out[m] = P(omega >= m)
  std::vector<double> out = d.prob;
  const std::uint32_t n = 1u << n_edges;
  for (int e = 0; e < n_edges; ++e)
    for (std::uint32_t m = 0; m < n; ++m)
      if (!(m & (1u << e))) out[m] += out[m | (1u << e)];
  return out;
}

std::vector<double> bernoulli_upset_probabilities(double density, int n_edges) {
  const std::uint32_t n = 1u << n_edges;
  std::vector<double> out(n);
  for (std::uint32_t m = 0; m < n; ++m)
    out[m] = std::pow(density, __builtin_popcount(m));
  return out;
}

void save_distribution(const std::string& path_prefix, const ExactDistribution& d,
                       const std::string& meta_json) {
  std::ofstream bin(path_prefix + ".tbl", std::ios::binary);
  std::uint64_t n = d.prob.size();
  std::uint32_t version = 1;
  bin.write(reinterpret_cast<const char*>(&version), sizeof version);
  bin.write(reinterpret_cast<const char*>(&n), sizeof n);
  bin.write(reinterpret_cast<const char*>(&d.z), sizeof d.z);
  bin.write(reinterpret_cast<const char*>(d.prob.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
  std::ofstream meta(path_prefix + ".json");
  meta << meta_json;
}

ExactDistribution load_distribution(const std::string& path_prefix, std::string& meta_json) {
  std::ifstream bin(path_prefix + ".tbl", std::ios::binary);
  if (!bin) throw std::runtime_error("load_distribution: missing " + path_prefix + ".tbl");
  std::uint32_t version;
  std::uint64_t n;
  ExactDistribution d;
  bin.read(reinterpret_cast<char*>(&version), sizeof version);
  if (version != 1) throw std::runtime_error("load_distribution: unknown version");
  bin.read(reinterpret_cast<char*>(&n), sizeof n);
  bin.read(reinterpret_cast<char*>(&d.z), sizeof d.z);
  d.prob.resize(n);
  bin.read(reinterpret_cast<char*>(d.prob.data()), static_cast<std::streamsize>(n * sizeof(double)));
  std::ifstream meta(path_prefix + ".json");
  meta_json.assign(std::istreambuf_iterator<char>(meta), std::istreambuf_iterator<char>());
  return d;
}

}  // namespace potts::oracle
