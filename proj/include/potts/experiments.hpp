#ifndef POTTS_EXPERIMENTS_HPP
#define POTTS_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "potts/dual_box.hpp"
#include "potts/gauge.hpp"
#include "potts/params.hpp"
#include "potts/stats.hpp"

namespace potts::experiments {

using potts::BoundaryCondition;
using potts::GaugeNorm;
using potts::PottsParams;
using potts::ScalingResult;

struct RunConfig {
  std::string experiment;
  std::vector<int> sizes{16, 32, 64, 128};
  int q = 2;
  double beta = 1.0;
  std::string boundary = "dobrushin";
  int n_samples = 2000;  // per size, split across chains
  int pure_samples = 0;  // mixture reference runs; 0 = 2x n_samples
  int n_chains = 0;      // 0 = worker count
  int burn_in = 400;     // cluster steps
  int sample_interval = 6;
  std::uint64_t seed = 20240801;
  double eps = 0.25;     // hitting target / event annulus exponent
  double nu = 0.1;
  int M = 12;
  double skeleton_K = 0.0;  // tau units; 0 = tau1 * ceil(n^eps_K)
  double skeleton_c = 2.0;
  double eps_K = 0.4;
  double smoothing = 0.05;
  int n_boot = 200;
  int workers = 0;       // 0 = POTTS_WORKERS or hardware
  std::string out_dir = ".";
  std::string norm_file;
  bool check = false;    // enforce acceptance windows
  bool write_outputs = true;
  bool write_svg = false;

  void validate() const;  // beta > beta_c enforced for coexistence runs
  PottsParams potts() const { return {q, beta}; }
  BoundaryCondition bc() const { return BoundaryCondition::parse(boundary); }
  int effective_workers() const;
  int effective_chains() const;

  static RunConfig from_map(const std::map<std::string, std::string>& kv);
};

struct SizeEstimate {
  int n = 0;
  double value = 0.0;
  double err = 0.0;
  long long samples = 0;
};

struct ExperimentResult {
  std::string name;
  std::vector<SizeEstimate> estimates;
  ScalingResult scaling;
  std::string summary_json;
  bool check_passed = true;
  std::vector<std::string> check_notes;
};

ExperimentResult run_hitting_decay(const RunConfig& rc);
ExperimentResult run_interface_fluctuation(const RunConfig& rc);
ExperimentResult run_tripod_fluctuation(const RunConfig& rc);
ExperimentResult run_mixture_decomposition(const RunConfig& rc);
ExperimentResult run_flower_statistics(const RunConfig& rc);

// fitted norm for the primal FK parameters of (q, beta): loaded from
// rc.norm_file when given, otherwise fitted once and cached in out_dir
GaugeNorm load_or_fit_norm(const RunConfig& rc);

}  // namespace potts::experiments

#endif
