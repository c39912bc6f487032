#ifndef POTTS_TAU_ESTIMATE_HPP
#define POTTS_TAU_ESTIMATE_HPP

#include <cstdint>
#include <vector>

#include "potts/gauge.hpp"
#include "potts/params.hpp"

namespace potts {

struct TauEstimate {
  Vec2 direction{1.0, 0.0};
  std::vector<int> ladder;
  std::vector<double> connectivity;  // mu_hat(0 <-> [k x])
  std::vector<long long> hits;
  long long n_samples = 0;
  double tau = 0.0;
  double err = 0.0;
};

// Monte Carlo point-to-point connectivities in a free-boundary box of side
// >= 4 max(ladder); tau from the Ornstein-Zernike form
// -log mu = tau k + (1/2) log k + const.
TauEstimate estimate_tau(const FKParams& fk, Vec2 direction, const std::vector<int>& ladder,
                         int n_samples, std::uint64_t seed);

struct NormFitConfig {
  int n_directions = 16;      // equally spaced, then orbit-averaged under D4
  std::vector<int> ladder{2, 3, 4, 5, 6};
  int n_samples = 100000;     // per direction
  int workers = 0;            // 0 = env/auto
};

// full norm fit: per-direction estimates, dihedral symmetrization, hull
GaugeNorm fit_norm(const FKParams& fk, const NormFitConfig& cfg, std::uint64_t seed);

}  // namespace potts

#endif
