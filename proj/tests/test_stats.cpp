#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "potts/io.hpp"
#include "potts/rng.hpp"
#include "potts/stats.hpp"

using namespace potts;

TEST_CASE("mean and standard error") {
  MeanErr m = mean_err({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.err == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK_THROWS_AS(mean_err({}), std::invalid_argument);
}

TEST_CASE("weighted least squares recovers a known line") {
  std::vector<double> x{1, 2, 3, 4, 5}, y, v;
  for (double xi : x) {
    y.push_back(3.0 * xi - 1.0);
    v.push_back(0.01);
  }
  LinFit f = weighted_least_squares(x, y, v);
  CHECK(f.slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(f.chi2 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("power-law fit recovers the exponent on synthetic data") {
  SplitMix64 rng(7);
  std::vector<double> sizes{16, 32, 64, 128};
  std::vector<std::vector<double>> samples;
  for (double n : sizes) {
    double p = 2.0 * std::pow(n, -0.5);
    std::vector<double> s;
    for (int i = 0; i < 20000; ++i) s.push_back(rng.uniform() < p ? 1.0 : 0.0);
    samples.push_back(s);
  }
  ScalingResult r = fit_power_law(sizes, samples, PowerStat::mean, 200, 9);
  CHECK(r.power_law);
  CHECK(std::abs(r.exponent + 0.5) < 0.1);
  CHECK(r.ci_lo < -0.5);
  CHECK(r.ci_hi > -0.5);
}

TEST_CASE("variance statistic scales like the underlying width") {
  SplitMix64 rng(21);
  std::vector<double> sizes{16, 32, 64, 128};
  std::vector<std::vector<double>> samples;
  for (double n : sizes) {
    std::vector<double> s;
    double width = std::sqrt(n);
    for (int i = 0; i < 4000; ++i) {
      double g = std::sqrt(-2.0 * std::log(rng.uniform() + 1e-15)) *
                 std::cos(2 * M_PI * rng.uniform());
      s.push_back(width * g);
    }
    samples.push_back(s);
  }
  ScalingResult r = fit_power_law(sizes, samples, PowerStat::variance, 200, 2);
  CHECK(r.power_law);
  CHECK(std::abs(r.exponent - 1.0) < 0.15);
}

TEST_CASE("zero estimates flag the fit as not a power law") {
  std::vector<double> sizes{8, 16, 32};
  std::vector<std::vector<double>> samples{{1, 0, 1, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  ScalingResult r = fit_power_law(sizes, samples, PowerStat::mean, 50, 3);
  CHECK(!r.power_law);
}

TEST_CASE("bootstrap calibration: wide intervals cover replica estimates") {
  // two independent runs of the same synthetic experiment; the 99%-style
  // interval exponent +- 2.6 sigma from run A must usually cover run B
  SplitMix64 seed_rng(1000);
  int covered = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    auto synth = [&](std::uint64_t s) {
      SplitMix64 rng(s);
      std::vector<double> sizes{16, 32, 64};
      std::vector<std::vector<double>> samples;
      for (double n : sizes) {
        double p = 1.5 * std::pow(n, -0.5);
        std::vector<double> v;
        for (int i = 0; i < 3000; ++i) v.push_back(rng.uniform() < p ? 1.0 : 0.0);
        samples.push_back(v);
      }
      return fit_power_law(sizes, samples, PowerStat::mean, 150, s ^ 0xF00Dull);
    };
    ScalingResult a = synth(seed_rng.next());
    ScalingResult b = synth(seed_rng.next());
    if (!a.power_law || !b.power_law) continue;
    if (b.exponent >= a.exponent - 2.6 * a.exponent_err &&
        b.exponent <= a.exponent + 2.6 * a.exponent_err)
      ++covered;
  }
  CHECK(covered >= static_cast<int>(0.9 * trials));
}

TEST_CASE("integrated autocorrelation of white noise is about one") {
  SplitMix64 rng(5);
  std::vector<double> series;
  for (int i = 0; i < 5000; ++i) series.push_back(rng.uniform());
  double tau = integrated_autocorrelation(series);
  CHECK(tau < 1.5);
  // an AR(1)-style correlated series has a larger time
  std::vector<double> ar{0.0};
  for (int i = 1; i < 5000; ++i) ar.push_back(0.9 * ar.back() + rng.uniform() - 0.5);
  CHECK(integrated_autocorrelation(ar) > 5.0);
}

TEST_CASE("config parsing") {
  auto kv = parse_config_text("# comment\n q = 3\nbeta=1.25\n sizes = 16,32 # tail\n\nbad line\n");
  CHECK(kv.at("q") == "3");
  CHECK(kv.at("beta") == "1.25");
  CHECK(kv.at("sizes") == "16,32");
  CHECK(kv.size() == 3);
}

TEST_CASE("csv and svg writers produce well-formed output") {
  write_csv("stats_tmp.csv", {"n", "value", "err"}, {{16, 0.5, 0.01}, {32, 0.35, 0.008}});
  std::string csv = read_text_file("stats_tmp.csv");
  CHECK(csv.rfind("n,value,err\n", 0) == 0);
  CHECK(csv.find("32,0.35,0.008") != std::string::npos);
  PlotSeries s{"decay", {16, 32, 64}, {0.5, 0.35, 0.25}};
  std::string svg = svg_plot({s}, true);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}
