#include "potts/spin_system.hpp"

#include <algorithm>
#include <cmath>

namespace potts {

void SpinLattice::finalize() {
  frozen.resize(n_vertices, -1);
  std::vector<int> deg(n_vertices, 0);
  for (auto& [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  adj_start.assign(n_vertices + 1, 0);
  for (int v = 0; v < n_vertices; ++v) adj_start[v + 1] = adj_start[v] + deg[v];
  adj.resize(edges.size() * 2);
  std::vector<int> fill(adj_start.begin(), adj_start.end() - 1);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    auto [u, v] = edges[e];
    adj[fill[u]++] = {v, e};
    adj[fill[v]++] = {u, e};
  }
}

bool SpinLattice::has_frozen() const {
  return std::any_of(frozen.begin(), frozen.end(), [](int c) { return c >= 0; });
}

bool SpinLattice::frozen_is_pure() const {
  int seen = -1;
  for (int c : frozen) {
    if (c < 0) continue;
    if (seen < 0)
      seen = c;
    else if (c != seen)
      return false;
  }
  return true;
}

SpinLattice make_box_lattice(const Domain& dom) {
  SpinLattice lat;
  lat.n_vertices = dom.n_sites();
  lat.edges.reserve(dom.n_edges());
  for (int e = 0; e < dom.n_edges(); ++e) {
    const Edge& ed = dom.edge(e);
    lat.edges.emplace_back(dom.site_index(ed.a), dom.site_index(ed.b));
  }
  lat.finalize();
  return lat;
}

std::vector<int> random_colors(const SpinLattice& lat, int q, SplitMix64& rng) {
  std::vector<int> colors(lat.n_vertices);
  for (int v = 0; v < lat.n_vertices; ++v)
    colors[v] = lat.frozen[v] >= 0 ? lat.frozen[v] : static_cast<int>(rng.below(q));
  return colors;
}

double potts_energy(const SpinLattice& lat, const std::vector<int>& colors) {
  long long agree = 0;
  for (std::size_t e = 0; e < lat.edges.size(); ++e) {
    auto [u, v] = lat.edges[e];
    if (lat.frozen[u] >= 0 && lat.frozen[v] >= 0) continue;
    if (colors[u] == colors[v]) ++agree;
  }
  return -static_cast<double>(agree);
}

void heat_bath_sweep(const SpinLattice& lat, std::vector<int>& colors, const PottsParams& pp,
                     SplitMix64& rng) {
  pp.validate();
  const int q = pp.q;
  // e^{beta k} for k up to the max degree
  int max_deg = 0;
  for (int v = 0; v < lat.n_vertices; ++v) max_deg = std::max(max_deg, lat.degree(v));
  std::vector<double> w(max_deg + 1);
  for (int k = 0; k <= max_deg; ++k) w[k] = std::exp(pp.beta * k);

  std::vector<int> count(q);
  for (int v = 0; v < lat.n_vertices; ++v) {
    if (lat.frozen[v] >= 0) continue;
    std::fill(count.begin(), count.end(), 0);
    const auto* nb = lat.neighbors(v);
    const int deg = lat.degree(v);
    for (int i = 0; i < deg; ++i) ++count[colors[nb[i].first]];
    double total = 0.0;
    for (int c = 0; c < q; ++c) total += w[count[c]];
    double u = rng.uniform() * total;
    int c = 0;
    for (; c < q - 1; ++c) {
      u -= w[count[c]];
      if (u < 0.0) break;
    }
    colors[v] = c;
  }
}

std::vector<std::uint8_t> es_spin_to_bond(const SpinLattice& lat, const std::vector<int>& colors,
                                          double beta, SplitMix64& rng) {
  const double p_open = 1.0 - std::exp(-beta);
  std::vector<std::uint8_t> bonds(lat.edges.size(), 0);
  for (std::size_t e = 0; e < lat.edges.size(); ++e) {
    auto [u, v] = lat.edges[e];
    if (colors[u] == colors[v] && rng.uniform() < p_open) bonds[e] = 1;
  }
  return bonds;
}

std::vector<int> es_bond_to_spin(const SpinLattice& lat, const std::vector<std::uint8_t>& bonds,
                                 int q, SplitMix64& rng) {
  UnionFind uf(lat.n_vertices);
  for (std::size_t e = 0; e < lat.edges.size(); ++e)
    if (bonds[e]) uf.merge(lat.edges[e].first, lat.edges[e].second);

  std::vector<int> cluster_color(lat.n_vertices, -2);
  for (int v = 0; v < lat.n_vertices; ++v) {
    if (lat.frozen[v] < 0) continue;
    int r = uf.find(v);
    if (cluster_color[r] >= 0 && cluster_color[r] != lat.frozen[v])
      throw CondViolation("es_bond_to_spin: cluster joins two boundary classes");
    cluster_color[r] = lat.frozen[v];
  }
  std::vector<int> colors(lat.n_vertices);
  for (int v = 0; v < lat.n_vertices; ++v) {
    int r = uf.find(v);
    if (cluster_color[r] == -2) cluster_color[r] = static_cast<int>(rng.below(q));
    colors[v] = cluster_color[r];
  }
  return colors;
}

void cluster_step(const SpinLattice& lat, std::vector<int>& colors, const PottsParams& pp,
                  SplitMix64& rng, SwScratch& scratch) {
  const double p_open = pp.p_dual();
  scratch.resize(lat.n_vertices);
  UnionFind& uf = scratch.uf;
  uf.reset();
  for (std::size_t e = 0; e < lat.edges.size(); ++e) {
    auto [u, v] = lat.edges[e];
    if (colors[u] == colors[v] && rng.uniform() < p_open) uf.merge(u, v);
  }
  auto& cluster_color = scratch.cluster_color;
  std::fill(cluster_color.begin(), cluster_color.end(), -2);
  for (int v = 0; v < lat.n_vertices; ++v)
    if (lat.frozen[v] >= 0) cluster_color[uf.find(v)] = lat.frozen[v];
  for (int v = 0; v < lat.n_vertices; ++v) {
    int r = uf.find(v);
    if (cluster_color[r] == -2) cluster_color[r] = static_cast<int>(rng.below(pp.q));
    colors[v] = cluster_color[r];
  }
}

void swendsen_wang_step(const SpinLattice& lat, std::vector<int>& colors, const PottsParams& pp,
                        SplitMix64& rng) {
  pp.validate();
  if (!lat.frozen_is_pure())
    throw std::invalid_argument(
        "swendsen_wang_step: mixed explicit boundary, use heat_bath_sweep or cluster_step");
  SwScratch scratch;
  cluster_step(lat, colors, pp, rng, scratch);
}

}  // namespace potts
