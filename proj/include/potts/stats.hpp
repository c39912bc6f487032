#ifndef POTTS_STATS_HPP
#define POTTS_STATS_HPP

#include <cstdint>
#include <vector>

namespace potts {

struct MeanErr {
  double mean = 0.0;
  double err = 0.0;  // standard error of the mean
  long long n = 0;
};
MeanErr mean_err(const std::vector<double>& xs);

double sample_variance(const std::vector<double>& xs);

// integrated autocorrelation time with a standard self-consistent window
double integrated_autocorrelation(const std::vector<double>& series);

struct LinFit {
  double slope = 0.0, intercept = 0.0;
  double slope_err = 0.0, intercept_err = 0.0;
  double chi2 = 0.0;
  int dof = 0;
};
// fit y = a x + b with per-point variances
LinFit weighted_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& var);

enum class PowerStat { mean, variance };

// log-log fit of a per-size statistic against size, with bootstrap errors
struct ScalingResult {
  std::vector<double> sizes;
  std::vector<double> estimates;  // statistic per size
  std::vector<double> errors;     // bootstrap standard error per size
  double exponent = 0.0;
  double exponent_err = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;  // bootstrap 95% interval
  bool power_law = true;            // false when a statistic is nonpositive
  double chi2 = 0.0;
  int dof = 0;
};

ScalingResult fit_power_law(const std::vector<double>& sizes,
                            const std::vector<std::vector<double>>& samples, PowerStat stat,
                            int n_boot, std::uint64_t seed);

}  // namespace potts

#endif
