#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "potts/experiments.hpp"
#include "potts/io.hpp"

using namespace potts;
namespace xp = potts::experiments;
using nlohmann::json;

namespace {
xp::RunConfig smoke_config(const std::string& name) {
  xp::RunConfig rc;
  rc.experiment = name;
  rc.sizes = {6, 8, 12};
  rc.q = 2;
  rc.beta = 1.1;
  rc.boundary = "dobrushin";
  rc.n_samples = 240;
  rc.n_chains = 3;
  rc.burn_in = 80;
  rc.sample_interval = 3;
  rc.n_boot = 60;
  rc.workers = 3;
  rc.out_dir = "xp_smoke";
  rc.write_outputs = true;
  return rc;
}

// canned anisotropic norm so the tripod test does not need a fit
std::string canned_norm_file() {
  std::vector<DirectionEstimate> dirs;
  for (int j = 0; j < 16; ++j)
    dirs.push_back({2 * M_PI * j / 16, 0.45 + 0.03 * (j % 2), 0.01});
  GaugeNorm norm = GaugeNorm::from_direction_values(dirs);
  norm.provenance = "canned test norm";
  std::filesystem::create_directories("xp_smoke");
  write_text_file("xp_smoke/canned_norm.json", norm.to_json());
  return "xp_smoke/canned_norm.json";
}
}  // namespace

TEST_CASE("config validation") {
  xp::RunConfig rc = smoke_config("hitting-decay");
  rc.beta = 0.5;  // below beta_c(2)
  CHECK_THROWS_AS(rc.validate(), std::invalid_argument);
  rc.beta = beta_critical(2);
  CHECK_THROWS_AS(rc.validate(), std::invalid_argument);
  rc = smoke_config("hitting-decay");
  rc.sizes = {32, 16};
  CHECK_THROWS_AS(rc.validate(), std::invalid_argument);
  CHECK_NOTHROW(smoke_config("x").validate());
}

TEST_CASE("config file round trip") {
  auto kv = parse_config_text("sizes=8,16\nq=3\nbeta = 1.3\nboundary=thirds\nsamples=50\nseed=9");
  xp::RunConfig rc = xp::RunConfig::from_map(kv);
  CHECK(rc.sizes == std::vector<int>{8, 16});
  CHECK(rc.q == 3);
  CHECK(rc.beta == doctest::Approx(1.3));
  CHECK(rc.boundary == "thirds");
  CHECK(rc.n_samples == 50);
  CHECK(rc.seed == 9);
}

TEST_CASE("hitting decay: smoke run with monotone epsilon targets") {
  xp::RunConfig rc = smoke_config("hitting-decay");
  auto res = xp::run_hitting_decay(rc);
  REQUIRE(res.estimates.size() == 3);
  for (const auto& e : res.estimates) {
    CHECK(e.value >= 0.0);
    CHECK(e.value <= 1.0);
    CHECK(e.samples == rc.n_samples);
  }
  // row layout: n, p2, err, then (p, err) for eps 0.1, default, 0.4
  std::string csv = read_text_file("xp_smoke/hitting-decay.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    REQUIRE(row.size() == 9);
    CHECK(row[3] <= row[5] + 1e-12);  // monotone in the target radius
    CHECK(row[5] <= row[7] + 1e-12);
  }
}

TEST_CASE("interface: displacement symmetry at small size") {
  xp::RunConfig rc = smoke_config("interface");
  rc.n_samples = 600;
  auto res = xp::run_interface_fluctuation(rc);
  REQUIRE(res.estimates.size() == 3);
  json summary = json::parse(res.summary_json);
  // mean displacement compatible with zero at 4 sigma
  std::string csv = read_text_file("xp_smoke/interface.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    REQUIRE(row.size() == 6);
    CHECK(std::abs(row[3]) <= 4.0 * row[4] + 0.5);
    CHECK(row[5] <= rc.n_samples * 0.2);  // not-found rate stays small
  }
}

TEST_CASE("mixture: estimator identity and pure-boundary consistency") {
  xp::RunConfig rc = smoke_config("mixture");
  rc.boundary = "alternating";
  rc.n_samples = 400;
  rc.pure_samples = 800;
  auto res = xp::run_mixture_decomposition(rc);
  json summary = json::parse(res.summary_json);
  for (const auto& per : summary.at("per_size")) {
    CHECK(std::abs(per.at("alpha_sum_plus_crossing").get<double>() - 1.0) < 1e-9);
    CHECK(per.at("cond_violations").get<long long>() == 0);
  }

  // pure boundary: alpha concentrates on the boundary color and the defect
  // is small
  xp::RunConfig prc = smoke_config("mixture");
  prc.boundary = "pure:1";
  prc.sizes = {6, 8, 10};
  prc.n_samples = 400;
  prc.out_dir = "xp_smoke_pure";
  auto pres = xp::run_mixture_decomposition(prc);
  json psummary = json::parse(pres.summary_json);
  for (const auto& per : psummary.at("per_size")) {
    auto alpha = per.at("alpha").get<std::vector<double>>();
    CHECK(alpha[0] > 0.9);
    CHECK(per.at("defect").get<double>() < 0.05);
  }
}

TEST_CASE("flowers: pure boundary has a good scale with probability one") {
  xp::RunConfig rc = smoke_config("flowers");
  rc.boundary = "pure:1";
  rc.n_samples = 150;
  rc.M = 12;
  auto res = xp::run_flower_statistics(rc);
  for (const auto& e : res.estimates) CHECK(e.value == doctest::Approx(1.0).epsilon(0.02));

  xp::RunConfig arc = smoke_config("flowers");
  arc.boundary = "alternating";
  arc.n_samples = 150;
  arc.out_dir = "xp_smoke_alt";
  auto ares = xp::run_flower_statistics(arc);
  for (const auto& e : ares.estimates) CHECK(e.value > 0.8);
}

TEST_CASE("tripod: smoke run with a canned norm") {
  xp::RunConfig rc = smoke_config("tripod");
  rc.q = 3;
  rc.beta = 1.3;
  rc.boundary = "thirds";
  rc.sizes = {8, 12, 16};
  rc.n_samples = 150;
  rc.norm_file = canned_norm_file();
  auto res = xp::run_tripod_fluctuation(rc);
  json summary = json::parse(res.summary_json);
  CHECK(summary.contains("per_size"));
  for (const auto& per : summary.at("per_size")) {
    CHECK(per.at("t1_violation_rate").get<double>() >= 0.0);
    CHECK(per.at("t1_violation_rate").get<double>() <= 1.0);
  }
}

TEST_CASE("experiments replay bit-exactly from config and seed") {
  xp::RunConfig rc = smoke_config("hitting-decay");
  rc.n_samples = 150;
  rc.write_outputs = false;
  auto a = xp::run_hitting_decay(rc);
  auto b = xp::run_hitting_decay(rc);
  CHECK(a.summary_json == b.summary_json);
  REQUIRE(a.estimates.size() == b.estimates.size());
  for (std::size_t i = 0; i < a.estimates.size(); ++i) {
    CHECK(a.estimates[i].value == b.estimates[i].value);
    CHECK(a.estimates[i].err == b.estimates[i].err);
  }
  // a different seed gives different samples
  rc.seed += 1;
  auto c = xp::run_hitting_decay(rc);
  CHECK(c.summary_json != a.summary_json);
}
