#include "potts/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "potts/rng.hpp"

namespace potts {

MeanErr mean_err(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean_err: empty sample");
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  if (xs.size() > 1) v /= static_cast<double>(xs.size() - 1);
  return {m, std::sqrt(v / static_cast<double>(xs.size())), static_cast<long long>(xs.size())};
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  return v / static_cast<double>(xs.size() - 1);
}

double integrated_autocorrelation(const std::vector<double>& series) {
  const int n = static_cast<int>(series.size());
  if (n < 8) return 1.0;
  double m = 0.0;
  for (double x : series) m += x;
  m /= n;
  double c0 = 0.0;
  for (double x : series) c0 += (x - m) * (x - m);
  c0 /= n;
  if (c0 <= 0.0) return 1.0;
  double tau = 0.5;
  for (int t = 1; t < n / 2; ++t) {
    double ct = 0.0;
    for (int i = 0; i + t < n; ++i) ct += (series[i] - m) * (series[i + t] - m);
    ct /= (n - t);
    tau += ct / c0;
    if (t >= 6.0 * (2.0 * tau)) break;  // self-consistent window
    if (ct <= 0.0) break;
  }
  return std::max(2.0 * tau, 1.0);
}

LinFit weighted_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& var) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n || var.size() != n)
    throw std::invalid_argument("weighted_least_squares: need >= 2 points");
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1.0 / std::max(var[i], 1e-300);
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
    swxx += w * x[i] * x[i];
    swxy += w * x[i] * y[i];
  }
  double det = sw * swxx - swx * swx;
  if (det <= 0) throw std::runtime_error("weighted_least_squares: degenerate design");
  LinFit f;
  f.slope = (sw * swxy - swx * swy) / det;
  f.intercept = (swxx * swy - swx * swxy) / det;
  f.slope_err = std::sqrt(sw / det);
  f.intercept_err = std::sqrt(swxx / det);
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - f.slope * x[i] - f.intercept;
    f.chi2 += r * r / std::max(var[i], 1e-300);
  }
  f.dof = static_cast<int>(n) - 2;
  return f;
}

namespace {
double statistic(const std::vector<double>& xs, PowerStat stat) {
  if (stat == PowerStat::mean) {
    double m = 0.0;
    for (double x : xs) m += x;
    return xs.empty() ? 0.0 : m / static_cast<double>(xs.size());
  }
  return sample_variance(xs);
}
}  // namespace

ScalingResult fit_power_law(const std::vector<double>& sizes,
                            const std::vector<std::vector<double>>& samples, PowerStat stat,
                            int n_boot, std::uint64_t seed) {
  if (sizes.size() != samples.size() || sizes.size() < 3)
    throw std::invalid_argument("fit_power_law: need >= 3 sizes with samples");
  ScalingResult out;
  out.sizes = sizes;
  for (const auto& s : samples) out.estimates.push_back(statistic(s, stat));

  // bootstrap the statistic per size and the fitted slope jointly
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> boot_stats(sizes.size());
  std::vector<double> boot_slopes;
  std::vector<double> scratch;
  for (int b = 0; b < n_boot; ++b) {
    std::vector<double> est(sizes.size());
    bool ok = true;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const auto& src = samples[i];
      scratch.resize(src.size());
      for (std::size_t j = 0; j < src.size(); ++j)
        scratch[j] = src[rng.below(static_cast<std::uint32_t>(src.size()))];
      est[i] = statistic(scratch, stat);
      boot_stats[i].push_back(est[i]);
      if (est[i] <= 0.0) ok = false;
    }
    if (!ok) continue;
    std::vector<double> lx, ly, lv(sizes.size(), 1.0);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      lx.push_back(std::log(sizes[i]));
      ly.push_back(std::log(est[i]));
    }
    boot_slopes.push_back(weighted_least_squares(lx, ly, lv).slope);
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    double e = boot_stats[i].empty() ? 0.0 : mean_err(boot_stats[i]).mean;
    double v = sample_variance(boot_stats[i]);
    (void)e;
    out.errors.push_back(std::sqrt(v));
  }

  for (double e : out.estimates)
    if (!(e > 0.0)) out.power_law = false;
  if (!out.power_law || boot_slopes.size() < 10) {
    out.power_law = false;
    return out;
  }

  std::vector<double> lx, ly, lv;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    lx.push_back(std::log(sizes[i]));
    ly.push_back(std::log(out.estimates[i]));
    double rel = out.errors[i] / out.estimates[i];
    lv.push_back(std::max(rel * rel, 1e-12));
  }
  LinFit f = weighted_least_squares(lx, ly, lv);
  out.exponent = f.slope;
  out.chi2 = f.chi2;
  out.dof = f.dof;
  std::sort(boot_slopes.begin(), boot_slopes.end());
  out.exponent_err = std::sqrt(sample_variance(boot_slopes));
  out.ci_lo = boot_slopes[static_cast<std::size_t>(0.025 * (boot_slopes.size() - 1))];
  out.ci_hi = boot_slopes[static_cast<std::size_t>(0.975 * (boot_slopes.size() - 1))];
  return out;
}

}  // namespace potts
