#include <CLI11.hpp>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "swarmsim/bench.hpp"
#include "swarmsim/config.hpp"
#include "swarmsim/errors.hpp"
#include "swarmsim/io.hpp"
#include "swarmsim/stability.hpp"
#include "swarmsim/swarm.hpp"
#include "swarmsim/world.hpp"

namespace {

using namespace swarmsim;

struct CommonOpts {
  std::string config_path;
  std::optional<std::string> scenario;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_out) {
  cmd->add_option("--config", opts.config_path, "mission config file (built-in defaults when omitted)");
  cmd->add_option("--scenario", opts.scenario, "scenario map file, overrides the config");
  cmd->add_option("--seed", opts.seed, "rng seed, overrides the config");
  if (with_out) {
    cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  }
}

MissionLog execute_mission(const CommonOpts& opts, SimConfig* config_out) {
  std::string snapshot;
  SimConfig config = load_config(opts.config_path, opts.scenario, opts.seed, &snapshot);
  EnvironmentMap env = EnvironmentMap::load(config.scenario_path);
  MissionLog log = run_mission(config, env);
  log.config_snapshot = snapshot;
  if (config_out != nullptr) *config_out = config;
  return log;
}

int cmd_run(const CommonOpts& opts) {
  SimConfig config;
  MissionLog log = execute_mission(opts, &config);
  log.write(opts.out_dir);
  std::printf("mission complete: %d agents, %.1f s simulated, seed %" PRIu64 "\n",
              log.agent_count, config.mission.duration, config.seed);
  for (const CoverageSample& s : log.coverage) {
    if (s.t >= config.mission.duration - config.mission.log_period / 2) {
      std::printf("  agent %d final coverage %.1f%%\n", s.agent_id, s.pct);
    }
  }
  std::printf("log written to %s\n", opts.out_dir.c_str());
  return 0;
}

int cmd_export_maps(const CommonOpts& opts) {
  MissionLog log = execute_mission(opts, nullptr);
  std::filesystem::create_directories(opts.out_dir);
  const std::filesystem::path base(opts.out_dir);

  std::map<int, const MapSnapshot*> latest;
  for (const MapSnapshot& snap : log.snapshots) {
    auto [it, inserted] = latest.try_emplace(snap.agent_id, &snap);
    if (!inserted && snap.step >= it->second->step) it->second = &snap;
  }
  for (const auto& [agent_id, snap] : latest) {
    char name[64];
    std::snprintf(name, sizeof(name), "slam_%d_%d.pgm", agent_id, snap->step);
    write_pgm((base / name).string(), snap->slam.grid());
    std::snprintf(name, sizeof(name), "cov_%d_%d.pgm", agent_id, snap->step);
    write_pgm((base / name).string(), snap->coverage.grid());
  }
  for (const PointSet& set : log.final_landmarks) {
    std::string csv;
    for (const Vec2& p : set.points) {
      char line[64];
      std::snprintf(line, sizeof(line), "%.6f,%.6f\n", p.x, p.y);
      csv += line;
    }
    write_text_file((base / ("landmarks_" + std::to_string(set.owner) + ".csv")).string(), csv);
  }
  std::printf("final maps for %zu agents written to %s\n", latest.size(), opts.out_dir.c_str());
  return 0;
}

struct StabilityOpts {
  int trials = 100;
  std::uint64_t seed = 42;
  StabilityTrialParams params;
};

int cmd_verify_stability(const StabilityOpts& opts) {
  StabilityReport report = verify_stability(opts.params, opts.trials, opts.seed);
  std::printf("stability: %d/%zu trials converged (pos tol %.3g m, heading tol %.3g rad)\n",
              report.num_converged, report.trials.size(), opts.params.tol_position,
              opts.params.tol_heading);
  std::printf("  worst final |e_c| %.3e m, worst final |e_theta| %.3e rad\n",
              report.max_final_ec, report.max_final_etheta);
  std::printf("  comparison bound: max V - W excess %.3e, W limit %.6f (formula %.6f, gap %.3e)\n",
              report.max_bound_excess, report.w_limit_formula + report.max_w_limit_gap,
              report.w_limit_formula, report.max_w_limit_gap);
  std::printf("  integrated %zu trials in %.2f s\n", report.trials.size(), report.elapsed_seconds);
  if (!report.all_converged()) {
    std::fprintf(stderr, "stability check failed: %zu trial(s) did not converge\n",
                 report.trials.size() - static_cast<std::size_t>(report.num_converged));
    return 1;
  }
  return 0;
}

struct IcpBenchOpts {
  std::uint64_t seed = 42;
  IcpBenchParams params;
  double rotation_tol_deg = 2.0;
  double min_success_rate = 0.98;
};

int cmd_icp_bench(const IcpBenchOpts& opts) {
  IcpBenchParams params = opts.params;
  params.rotation_tol = opts.rotation_tol_deg * kPi / 180.0;
  IcpBenchReport report = run_icp_bench(params, opts.seed);
  const int counted = static_cast<int>(report.trials.size()) - report.num_skipped;
  std::printf("icp bench: %d/%d recovered (tol %.2f deg / %.3f m), %d skipped degenerate\n",
              report.num_success, counted, opts.rotation_tol_deg, params.translation_tol,
              report.num_skipped);
  std::printf("  worst rotation error %.4f deg, worst translation error %.4f m\n",
              report.max_rot_error * 180.0 / kPi, report.max_trans_error);
  std::printf("  %zu trials in %.2f s\n", report.trials.size(), report.elapsed_seconds);
  if (counted > 0 && report.success_rate() < opts.min_success_rate) {
    std::fprintf(stderr, "icp bench failed: success rate %.3f below %.3f\n",
                 report.success_rate(), opts.min_success_rate);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarmsim: deterministic multi-agent indoor exploration simulator"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  CLI::App* run = app.add_subcommand("run", "simulate a mission and write its log directory");
  add_common(run, run_opts, true);

  CommonOpts export_opts;
  CLI::App* export_maps =
      app.add_subcommand("export-maps", "simulate a mission and export only the final maps");
  add_common(export_maps, export_opts, true);

  StabilityOpts stab;
  CLI::App* verify =
      app.add_subcommand("verify-stability", "numerically check closed-loop error convergence");
  verify->add_option("--trials", stab.trials, "number of random initial conditions")
      ->capture_default_str();
  verify->add_option("--seed", stab.seed, "rng seed")->capture_default_str();
  verify->add_option("--tolerance", stab.params.tol_position, "final position error tolerance, m")
      ->capture_default_str();
  verify->add_option("--heading-tolerance", stab.params.tol_heading,
                     "final heading error tolerance, rad")
      ->capture_default_str();
  verify->add_option("--duration", stab.params.duration, "integration horizon, s")
      ->capture_default_str();
  verify->add_option("--dt", stab.params.dt, "integration step, s")->capture_default_str();
  verify->add_option("--delta", stab.params.delta, "heading band for the comparison bound, rad")
      ->capture_default_str();
  verify->add_option("--k-c", stab.params.gains.k_c, "position gain")->capture_default_str();
  verify->add_option("--k-s", stab.params.gains.k_s, "heading gate sharpness")
      ->capture_default_str();
  verify->add_option("--k-t", stab.params.gains.k_t, "position saturation rate")
      ->capture_default_str();
  verify->add_option("--k-theta", stab.params.gains.k_theta, "heading gain")
      ->capture_default_str();
  verify->add_option("--r-c", stab.params.r_c, "camera center offset, m")->capture_default_str();

  IcpBenchOpts bench;
  CLI::App* icp_bench =
      app.add_subcommand("icp-bench", "randomized rigid-transform recovery harness");
  icp_bench->add_option("--trials", bench.params.trials, "number of randomized trials")
      ->capture_default_str();
  icp_bench->add_option("--seed", bench.seed, "rng seed")->capture_default_str();
  icp_bench->add_option("--tolerance", bench.params.translation_tol,
                        "translation recovery tolerance, m")
      ->capture_default_str();
  icp_bench->add_option("--rotation-tolerance", bench.rotation_tol_deg,
                        "rotation recovery tolerance, deg")
      ->capture_default_str();
  icp_bench->add_option("--noise", bench.params.noise_sigma, "per-point noise sigma, m")
      ->capture_default_str();
  icp_bench->add_option("--min-points", bench.params.min_landmarks, "smallest landmark count")
      ->capture_default_str();
  icp_bench->add_option("--max-points", bench.params.max_landmarks, "largest landmark count")
      ->capture_default_str();
  icp_bench
      ->add_option("--min-success-rate", bench.min_success_rate, "required recovery fraction")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (export_maps->parsed()) return cmd_export_maps(export_opts);
    if (verify->parsed()) return cmd_verify_stability(stab);
    if (icp_bench->parsed()) return cmd_icp_bench(bench);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const SyncFailureError& e) {
    std::fprintf(stderr, "sync failure: %s\n", e.what());
    return 3;
  } catch (const SimError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
