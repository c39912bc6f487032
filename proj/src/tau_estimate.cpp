#include "potts/tau_estimate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "potts/io.hpp"
#include "potts/lattice.hpp"
#include "potts/rng.hpp"
#include "potts/spin_system.hpp"
#include "potts/stats.hpp"
#include "potts/unionfind.hpp"

namespace potts {

TauEstimate estimate_tau(const FKParams& fk, Vec2 direction, const std::vector<int>& ladder,
                         int n_samples, std::uint64_t seed) {
  fk.validate();
  if (!fk.subcritical())
    throw std::invalid_argument("estimate_tau: p must be below p_c(q) = sqrt(q)/(1+sqrt(q))");
  if (ladder.empty() || !std::is_sorted(ladder.begin(), ladder.end()))
    throw std::invalid_argument("estimate_tau: ladder must be increasing");
  const bool is_percolation = fk.q == 1.0;
  const int qi = static_cast<int>(fk.q);
  if (!is_percolation && (std::abs(fk.q - qi) > 1e-12 || qi < 2))
    throw std::invalid_argument("estimate_tau: q must be 1 or an integer >= 2");

  double dn = std::hypot(direction[0], direction[1]);
  Vec2 dir{direction[0] / dn, direction[1] / dn};
  const int kmax = ladder.back();
  Domain dom(2 * kmax);  // side 4 kmax + 1
  const int origin = dom.site_index({0, 0});
  std::vector<int> targets;
  for (int k : ladder) {
    Point t{static_cast<int>(std::lround(k * dir[0])), static_cast<int>(std::lround(k * dir[1]))};
    targets.push_back(dom.site_index(t));
  }

  SplitMix64 rng = SplitMix64::stream(seed, 0);
  TauEstimate est;
  est.direction = dir;
  est.ladder = ladder;
  est.hits.assign(ladder.size(), 0);
  est.n_samples = n_samples;

  UnionFind uf(dom.n_sites());
  auto measure = [&](const std::vector<std::uint8_t>& bonds) {
    uf.reset();
    for (int e = 0; e < dom.n_edges(); ++e)
      if (bonds[e]) uf.merge(dom.site_index(dom.edge(e).a), dom.site_index(dom.edge(e).b));
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (uf.connected(origin, targets[i])) ++est.hits[i];
  };

  if (is_percolation) {
    std::vector<std::uint8_t> bonds(dom.n_edges());
    for (int s = 0; s < n_samples; ++s) {
      for (auto& b : bonds) b = rng.uniform() < fk.p;
      measure(bonds);
    }
  } else {
    const PottsParams pp{qi, -std::log(1.0 - fk.p)};  // 1 - e^{-beta} = p
    SpinLattice lat = make_box_lattice(dom);
    auto colors = random_colors(lat, qi, rng);
    SwScratch scratch;
    for (int i = 0; i < 100; ++i) cluster_step(lat, colors, pp, rng, scratch);
    for (int s = 0; s < n_samples; ++s) {
      cluster_step(lat, colors, pp, rng, scratch);
      cluster_step(lat, colors, pp, rng, scratch);
      measure(es_spin_to_bond(lat, colors, pp.beta, rng));
    }
  }

  std::vector<double> xs, ys, vs;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    double mu = static_cast<double>(est.hits[i]) / n_samples;
    est.connectivity.push_back(mu);
    if (est.hits[i] == 0) continue;  // no information at this k
    xs.push_back(ladder[i]);
    // Ornstein-Zernike prefactor correction
    ys.push_back(-std::log(mu) - 0.5 * std::log(static_cast<double>(ladder[i])));
    vs.push_back((1.0 - mu) / (mu * n_samples));
  }
  if (xs.size() < 2) throw std::runtime_error("estimate_tau: not enough connected ladder points");
  LinFit fit = weighted_least_squares(xs, ys, vs);
  est.tau = fit.slope;
  est.err = fit.slope_err;
  return est;
}

GaugeNorm fit_norm(const FKParams& fk, const NormFitConfig& cfg, std::uint64_t seed) {
  const int nd = cfg.n_directions;
  if (nd < 8 || nd % 8 != 0)
    throw std::invalid_argument("fit_norm: direction count must be a positive multiple of 8");
  std::vector<TauEstimate> raw(nd);
  const int workers = cfg.workers > 0 ? cfg.workers : env_worker_count();
  std::vector<std::thread> pool;
  std::atomic_int next{0};
  for (int w = 0; w < std::min(workers, nd); ++w) {
    pool.emplace_back([&] {
      for (int j = next.fetch_add(1); j < nd; j = next.fetch_add(1)) {
        double angle = 2.0 * M_PI * j / nd;
        raw[j] = estimate_tau(fk, {std::cos(angle), std::sin(angle)}, cfg.ladder, cfg.n_samples,
                              SplitMix64::mix(seed ^ (0x9E3779B97F4A7C15ull * (j + 1))));
      }
    });
  }
  for (auto& t : pool) t.join();

  // fold each angle into the fundamental sector [0, pi/4] of the dihedral
  // group and average estimates over each orbit
  auto fold = [](double angle) {
    double t = std::fmod(std::fmod(angle, M_PI / 2.0) + M_PI / 2.0, M_PI / 2.0);
    return t > M_PI / 4.0 ? M_PI / 2.0 - t : t;
  };
  std::vector<DirectionEstimate> table(nd);
  std::vector<DirectionEstimate> averaged(nd);
  for (int j = 0; j < nd; ++j)
    table[j] = {2.0 * M_PI * j / nd, raw[j].tau, raw[j].err};
  for (int j = 0; j < nd; ++j) {
    double fj = fold(table[j].angle);
    double wsum = 0.0, tsum = 0.0, vsum = 0.0;
    int members = 0;
    for (int i = 0; i < nd; ++i) {
      if (std::abs(fold(table[i].angle) - fj) > 1e-9) continue;
      double w = 1.0 / std::max(table[i].err * table[i].err, 1e-12);
      wsum += w;
      tsum += w * table[i].tau;
      vsum += table[i].err * table[i].err;
      ++members;
    }
    averaged[j] = {table[j].angle, tsum / wsum, std::sqrt(vsum) / members};
  }
  GaugeNorm norm = GaugeNorm::from_direction_values(averaged);
  norm.direction_table = table;  // raw independent estimates kept as provenance
  std::ostringstream prov;
  prov << "fk p=" << fk.p << " q=" << fk.q << " samples=" << cfg.n_samples
       << " directions=" << nd << " seed=" << seed << " ladder=";
  for (int k : cfg.ladder) prov << k << " ";
  norm.provenance = prov.str();
  return norm;
}

}  // namespace potts
