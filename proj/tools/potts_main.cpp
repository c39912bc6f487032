// command line front end: oracle checks, norm estimation, Steiner and
// skeleton utilities, and the Monte Carlo experiment pipelines
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "potts/bonds.hpp"
#include "potts/clusters.hpp"
#include "potts/dual_box.hpp"
#include "potts/exact.hpp"
#include "potts/experiments.hpp"
#include "potts/io.hpp"
#include "potts/skeleton.hpp"
#include "potts/steiner.hpp"
#include "potts/tau_estimate.hpp"

using namespace potts;
namespace xp = potts::experiments;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCheckFailed = 3;

int run_oracle_check(bool quick) {
  using namespace potts::oracle;
  bool all_ok = true;
  auto report = [&](const std::string& name, double err, double tol) {
    bool ok = err < tol;
    all_ok = all_ok && ok;
    std::printf("%-58s %12.3e  %s\n", name.c_str(), err, ok ? "ok" : "FAIL");
  };
  const std::vector<double> betas = quick ? std::vector<double>{1.2}
                                          : std::vector<double>{0.5, 1.2};
  for (const TinyGraph& g : bundled_graphs()) {
    for (int q : {2, 3}) {
      for (double beta : betas) {
        PottsParams pp{q, beta};
        report("es-identity " + g.name + " q=" + std::to_string(q) +
                   " beta=" + std::to_string(beta).substr(0, 4),
               check_es_identity(g, pp), 1e-10);
        report("free-energy " + g.name + " q=" + std::to_string(q), free_energy_defect(g, pp),
               1e-10);
      }
      if (g.dual) {
        FKParams fk{0.4, static_cast<double>(q)};
        report("duality " + g.name + " q=" + std::to_string(q), check_duality(g, fk), 1e-10);
      }
    }
  }
  for (int q : {2, 3}) {
    PottsParams pp{q, 1.1};
    report("heat-bath invariance grid-2x2 q=" + std::to_string(q),
           heat_bath_invariance_tv(grid_graph(2, 2), pp), 1e-10);
    report("cluster invariance grid-2x2 q=" + std::to_string(q),
           cluster_invariance_tv(grid_graph(2, 2), pp), 1e-10);
    report("heat-bath invariance path-3 q=" + std::to_string(q),
           heat_bath_invariance_tv(path_graph(3), pp), 1e-10);
    report("cluster invariance path-3 q=" + std::to_string(q),
           cluster_invariance_tv(path_graph(3), pp), 1e-10);
  }
  std::printf("%s\n", all_ok ? "oracle-check: all ok" : "oracle-check: FAILURES");
  return all_ok ? kExitOk : kExitCheckFailed;
}

std::vector<Vec2> parse_points(const std::string& text) {
  std::vector<Vec2> pts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    auto comma = tok.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("points: expected x,y;x,y;...");
    pts.push_back({std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1))});
  }
  return pts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2d Potts / random-cluster interface laboratory"};
  app.require_subcommand(1);

  // oracle-check
  bool quick = false;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "exact coupling and duality battery");
  oracle_cmd->add_flag("--quick", quick, "single beta only");

  // estimate-tau
  double et_p = -1.0, et_beta = -1.0;
  double et_q = 2.0;
  int et_samples = 100000, et_directions = 16, et_workers = 0;
  std::string et_out = "norm.json";
  std::uint64_t et_seed = 1;
  auto* tau_cmd = app.add_subcommand("estimate-tau", "fit the surface-tension norm");
  tau_cmd->add_option("--p", et_p, "FK edge weight (subcritical)");
  tau_cmd->add_option("--beta", et_beta, "Potts beta; primal p is derived");
  tau_cmd->add_option("--q", et_q, "cluster weight")->required();
  tau_cmd->add_option("--samples", et_samples, "samples per direction");
  tau_cmd->add_option("--directions", et_directions, "estimated directions");
  tau_cmd->add_option("--seed", et_seed, "rng seed");
  tau_cmd->add_option("--workers", et_workers, "worker threads");
  tau_cmd->add_option("--out", et_out, "output norm json");

  // steiner
  std::string st_points, st_partition, st_norm, st_json = "forest.json", st_svg;
  auto* st_cmd = app.add_subcommand("steiner", "solve a Steiner forest");
  st_cmd->add_option("--terminals", st_points, "x,y;x,y;...")->required();
  st_cmd->add_option("--partition", st_partition, "blocks like 0,1|2,3 (default: one block)");
  st_cmd->add_option("--norm", st_norm, "norm json (default: Euclidean)");
  st_cmd->add_option("--json", st_json, "output json path");
  st_cmd->add_option("--svg", st_svg, "optional svg path");

  // skeleton
  std::string sk_sample, sk_norm, sk_json = "skeleton.json";
  int sk_n = 24, sk_q = 2;
  double sk_beta = 1.0, sk_K = 4.0, sk_c = 2.0;
  std::string sk_boundary = "dobrushin";
  std::uint64_t sk_seed = 7;
  auto* sk_cmd = app.add_subcommand("skeleton", "build the forest skeleton of a sample");
  sk_cmd->add_option("--sample", sk_sample, "sample dump (.fks); otherwise a sample is drawn");
  sk_cmd->add_option("--n", sk_n, "box radius");
  sk_cmd->add_option("--q", sk_q, "colors");
  sk_cmd->add_option("--beta", sk_beta, "inverse temperature");
  sk_cmd->add_option("--boundary", sk_boundary, "boundary condition");
  sk_cmd->add_option("--seed", sk_seed, "rng seed");
  sk_cmd->add_option("--K", sk_K, "tau-ball radius");
  sk_cmd->add_option("--c", sk_c, "hat padding coefficient");
  sk_cmd->add_option("--norm", sk_norm, "norm json (default: scaled L-inf)");
  sk_cmd->add_option("--json", sk_json, "output path");

  // experiment subcommands share the configuration surface
  std::map<std::string, CLI::App*> xp_cmds;
  std::string cfg_file;
  std::map<std::string, std::string> overrides;
  std::string ov_sizes, ov_boundary, ov_out, ov_norm;
  int ov_q = 0, ov_samples = 0, ov_M = 0, ov_workers = -1, ov_chains = 0;
  double ov_beta = 0.0, ov_eps = 0.0;
  std::uint64_t ov_seed = 0;
  bool ov_check = false, ov_svg = false;
  for (const char* name : {"hitting-decay", "interface", "tripod", "mixture", "flowers"}) {
    auto* cmd = app.add_subcommand(name, std::string("experiment: ") + name);
    cmd->add_option("--config", cfg_file, "key = value config file");
    cmd->add_option("--sizes", ov_sizes, "comma separated box radii");
    cmd->add_option("--q", ov_q, "colors");
    cmd->add_option("--beta", ov_beta, "inverse temperature (> beta_c)");
    cmd->add_option("--boundary", ov_boundary, "pure:i | dobrushin | thirds | alternating | custom:...");
    cmd->add_option("--samples", ov_samples, "samples per size");
    cmd->add_option("--seed", ov_seed, "rng seed");
    cmd->add_option("--eps", ov_eps, "target exponent epsilon");
    cmd->add_option("--M", ov_M, "marked vertex budget");
    cmd->add_option("--chains", ov_chains, "chain count");
    cmd->add_option("--workers", ov_workers, "worker threads (or POTTS_WORKERS)");
    cmd->add_option("--out", ov_out, "output directory");
    cmd->add_option("--norm-file", ov_norm, "fitted norm json");
    cmd->add_flag("--check", ov_check, "enforce acceptance windows (exit 3 on failure)");
    cmd->add_flag("--svg", ov_svg, "emit svg plots");
    xp_cmds[name] = cmd;
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle_cmd->parsed()) return run_oracle_check(quick);

    if (tau_cmd->parsed()) {
      FKParams fk;
      fk.q = et_q;
      if (et_p > 0)
        fk.p = et_p;
      else if (et_beta > 0)
        fk.p = PottsParams{static_cast<int>(et_q), et_beta}.p_primal();
      else
        throw std::invalid_argument("estimate-tau: give --p or --beta");
      NormFitConfig cfg;
      cfg.n_samples = et_samples;
      cfg.n_directions = et_directions;
      cfg.workers = et_workers;
      GaugeNorm norm = fit_norm(fk, cfg, et_seed);
      write_text_file(et_out, norm.to_json());
      double spread_lo = 1e300, spread_hi = 0.0;
      for (const auto& d : norm.direction_table) {
        spread_lo = std::min(spread_lo, d.tau);
        spread_hi = std::max(spread_hi, d.tau);
      }
      std::printf("tau(e1) = %.5f   raw direction range [%.5f, %.5f]   -> %s\n",
                  norm(1.0, 0.0), spread_lo, spread_hi, et_out.c_str());
      return kExitOk;
    }

    if (st_cmd->parsed()) {
      steiner::TerminalSet ts;
      ts.points = parse_points(st_points);
      if (st_partition.empty()) {
        ts = steiner::TerminalSet::trivial(ts.points);
      } else {
        std::stringstream ss(st_partition);
        std::string blk;
        while (std::getline(ss, blk, '|')) {
          std::vector<int> ids;
          std::stringstream bs(blk);
          std::string tok;
          while (std::getline(bs, tok, ',')) ids.push_back(std::stoi(tok));
          ts.blocks.push_back(ids);
        }
      }
      GaugeNorm norm =
          st_norm.empty() ? GaugeNorm::euclidean(1.0) : GaugeNorm::from_json(read_text_file(st_norm));
      auto forest = steiner::solve_steiner_forest(ts, norm);
      auto audit = steiner::audit_forest(forest, norm, 0.05, 99);
      write_text_file(st_json, steiner::forest_to_json(forest));
      if (!st_svg.empty()) write_text_file(st_svg, steiner::forest_to_svg(forest));
      std::printf("forest length %.6f, min inner angle %.2f deg, degrees-3 %s\n", forest.length,
                  audit.min_inner_angle * 180.0 / M_PI,
                  audit.all_inner_degree_three ? "yes" : "no");
      return kExitOk;
    }

    if (sk_cmd->parsed()) {
      BondConfig primal;
      int n = sk_n;
      if (!sk_sample.empty()) {
        std::ifstream in(sk_sample, std::ios::binary);
        SampleHeader h;
        primal = read_sample(in, h);
        if (primal.lattice == LatticeTag::dual) primal = dual_config(primal);
        n = primal.n;
      } else {
        PottsParams pp{sk_q, sk_beta};
        primal = sample_conditioned_fk(n, pp, BoundaryCondition::parse(sk_boundary),
                                       {800, 10}, sk_seed);
      }
      Domain dom(n);
      GaugeNorm norm = sk_norm.empty() ? GaugeNorm::linf_ball(1.0)
                                       : GaugeNorm::from_json(read_text_file(sk_norm));
      auto cl = boundary_cluster(primal, dom);
      std::vector<Point> marked;
      auto scale = scale_M(primal, dom, 12);
      if (scale) marked = marked_vertices(primal, dom, *scale);
      if (marked.empty()) {
        // fall back to the outermost boundary-cluster sites as roots
        std::printf("no marked vertices at any good scale; skeleton of the boundary cluster\n");
        if (cl.empty()) throw std::runtime_error("skeleton: empty boundary cluster");
        marked.push_back(dom.site_at(cl.front()));
      }
      std::vector<int> cluster;
      if (scale) {
        cluster = annulus_boundary_set(primal, dom, *scale);
      } else {
        cluster = cl;
      }
      SkeletonParams sp{sk_K, sk_c};
      Skeleton skel = build_skeleton(primal, dom, cluster, marked, sp, norm);
      auto chk = check_skeleton(skel, primal, dom, cluster, marked, norm);
      write_text_file(sk_json, skeleton_to_json(skel));
      std::printf("skeleton: %zu vertices in %zu trees; checks %s -> %s\n",
                  skel.vertices.size(), skel.groups.size(), chk.ok() ? "ok" : "FAILED",
                  sk_json.c_str());
      return chk.ok() ? kExitOk : kExitCheckFailed;
    }

    // experiments
    for (auto& [name, cmd] : xp_cmds) {
      if (!cmd->parsed()) continue;
      std::map<std::string, std::string> kv;
      if (!cfg_file.empty()) kv = read_config_file(cfg_file);
      if (cmd->count("--sizes")) kv["sizes"] = ov_sizes;
      if (cmd->count("--q")) kv["q"] = std::to_string(ov_q);
      if (cmd->count("--beta")) kv["beta"] = std::to_string(ov_beta);
      if (cmd->count("--boundary")) kv["boundary"] = ov_boundary;
      if (cmd->count("--samples")) kv["samples"] = std::to_string(ov_samples);
      if (cmd->count("--seed")) kv["seed"] = std::to_string(ov_seed);
      if (cmd->count("--eps")) kv["eps"] = std::to_string(ov_eps);
      if (cmd->count("--M")) kv["M"] = std::to_string(ov_M);
      if (cmd->count("--chains")) kv["chains"] = std::to_string(ov_chains);
      if (cmd->count("--workers")) kv["workers"] = std::to_string(ov_workers);
      if (cmd->count("--out")) kv["out_dir"] = ov_out;
      if (cmd->count("--norm-file")) kv["norm_file"] = ov_norm;
      xp::RunConfig rc = xp::RunConfig::from_map(kv);
      rc.experiment = name;
      rc.check = ov_check;
      rc.write_svg = ov_svg;
      // defaults that differ per experiment
      if (!cmd->count("--boundary") && !kv.count("boundary")) {
        if (name == "tripod") rc.boundary = "thirds";
        if (name == "mixture" || name == "flowers") rc.boundary = "alternating";
      }
      if (name == "tripod" && !cmd->count("--q") && !kv.count("q")) {
        rc.q = 3;
        rc.beta = std::max(rc.beta, 1.2);
      }
      xp::ExperimentResult res;
      if (name == "hitting-decay") res = xp::run_hitting_decay(rc);
      else if (name == "interface") res = xp::run_interface_fluctuation(rc);
      else if (name == "tripod") res = xp::run_tripod_fluctuation(rc);
      else if (name == "mixture") res = xp::run_mixture_decomposition(rc);
      else res = xp::run_flower_statistics(rc);
      for (const auto& e : res.estimates)
        std::printf("n=%4d   estimate=%.6g   err=%.3g   samples=%lld\n", e.n, e.value, e.err,
                    e.samples);
      if (res.scaling.power_law)
        std::printf("exponent %.4f +- %.4f  (95%% ci [%.4f, %.4f])\n", res.scaling.exponent,
                    res.scaling.exponent_err, res.scaling.ci_lo, res.scaling.ci_hi);
      for (const auto& note : res.check_notes) std::printf("check: %s\n", note.c_str());
      std::printf("outputs in %s\n", rc.out_dir.c_str());
      if (rc.check && !res.check_passed) return kExitCheckFailed;
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
