// Command-line front end: solve, synth, bench and oracle.
//
// Exit codes: 0 success, 1 bad input, 2 certification not reached within the
// time budget, 3 oracle grid over the cell cap.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gopac/bounds.h"
#include "gopac/estimators.h"
#include "gopac/experiment.h"
#include "gopac/io.h"
#include "gopac/oracle.h"
#include "gopac/solver.h"
#include "gopac/synth.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitTimeout = 2;
constexpr int kExitCellCap = 3;

struct SolveArgs {
  std::string instance;
  double theta_deg = 1.0;
  std::string bound = "gamma";
  int threads = 1;
  bool guess_verify = false;
  std::optional<double> time_budget;
  std::uint64_t seed = 0;
  std::string trace;
  std::optional<double> zeta;
  std::string solver = "gopac";
  std::int64_t ransac_iterations = 100000;
  int precompute_depth = 5;
  std::string report;
  std::string ground_truth;
};

struct SynthArgs {
  std::string config;
  std::string out = "instance.json";
  std::string gt_out = "ground_truth.json";
};

struct BenchArgs {
  std::string sweep;
  std::string out;
};

struct OracleArgs {
  std::string instance;
  double rot_step = 0.1;
  double trans_step = 0.1;
  std::int64_t cell_cap = 10'000'000;
  std::string report;
};

void Emit(const gopac::Json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
  } else {
    gopac::WriteTextFile(path, text);
  }
}

gopac::ProblemInstance LoadInstance(const std::string& path) {
  std::vector<std::string> warnings;
  gopac::ProblemInstance inst =
      gopac::InstanceFromJson(gopac::ReadJsonFile(path), &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  return inst;
}

int RunSolve(const SolveArgs& args, bool theta_given, bool zeta_given) {
  gopac::ProblemInstance inst = LoadInstance(args.instance);
  if (theta_given) {
    if (!(args.theta_deg > 0.0 && args.theta_deg < 180.0)) {
      throw gopac::FormatError("--theta-deg", "must lie in (0, 180)");
    }
    inst.theta = args.theta_deg * gopac::kPi / 180.0;
  }
  if (zeta_given) inst.translation_domain.zeta = *args.zeta;
  try {
    inst.Validate();
  } catch (const std::invalid_argument& e) {
    throw gopac::FormatError(args.instance, e.what());
  }

  gopac::RunReport report;
  report.instance_id = args.instance;
  gopac::Solution solution;
  if (args.solver == "ransac") {
    report.solver = "ransac";
    solution = gopac::RansacBaseline(inst, args.ransac_iterations, args.seed);
  } else if (args.solver == "gopac") {
    gopac::SolverConfig cfg;
    cfg.bound_mode = gopac::ParseBoundMode(args.bound);
    cfg.threads = args.threads;
    cfg.guess_verify = args.guess_verify;
    cfg.time_budget = args.time_budget;
    cfg.precompute_depth = args.precompute_depth;
    cfg.record_trace = !args.trace.empty();
    solution = gopac::GopacSolve(inst, cfg);
    report.solver = "gopac-" + std::string(gopac::BoundModeName(cfg.bound_mode));
  } else {
    throw gopac::FormatError("--solver", "expected gopac or ransac");
  }
  report.nu_star = solution.nu_star;
  report.pose = solution.pose;
  report.optimal = solution.optimal;
  report.wall_time = solution.wall_time;
  report.correspondences = solution.correspondences;
  if (!args.ground_truth.empty()) {
    const gopac::GroundTruth gt =
        gopac::GroundTruthFromJson(gopac::ReadJsonFile(args.ground_truth));
    report.reference_pose = gt.pose;
    report.reference_inliers = gopac::Objective(gt.pose, inst);
    report.succ_inliers = solution.nu_star >= *report.reference_inliers;
    const gopac::PoseSuccessFlags flags =
        gopac::PoseSuccess(solution.pose, gt.pose);
    report.succ_pose = flags.rot_ok && flags.trans_ok;
  }
  Emit(gopac::ReportToJson(report), args.report);
  if (!args.trace.empty()) {
    gopac::WriteTextFile(args.trace, gopac::TraceToCsv(solution.trace));
  }
  if (args.solver == "gopac" && !solution.optimal) return kExitTimeout;
  return kExitOk;
}

int RunSynth(const SynthArgs& args) {
  const gopac::Json j = gopac::ReadJsonFile(args.config);
  const gopac::SynthConfig cfg = gopac::SynthConfigFromJson(j);
  const auto [inst, gt] = gopac::Generate(cfg);
  gopac::Json gt_json = gopac::GroundTruthToJson(gt);
  gt_json["metadata"] = {{"omega_3d", cfg.omega_3d},
                         {"omega_2d", cfg.omega_2d},
                         {"sigma_px", cfg.sigma_px},
                         {"seed", cfg.seed},
                         {"config", gopac::SynthConfigToJson(cfg)}};
  gopac::WriteTextFile(args.out, gopac::InstanceToJson(inst).dump(2) + "\n");
  gopac::WriteTextFile(args.gt_out, gt_json.dump(2) + "\n");
  return kExitOk;
}

int RunBench(const BenchArgs& args) {
  const gopac::SweepConfig cfg =
      gopac::SweepConfigFromJson(gopac::ReadJsonFile(args.sweep));
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!args.out.empty()) {
    file.open(args.out);
    if (!file) throw std::runtime_error("cannot write " + args.out);
    out = &file;
  }
  *out << gopac::SweepCsvHeader() << std::flush;
  gopac::RunSweep(cfg, [out](const gopac::SweepRow& row) {
    *out << gopac::SweepCsvRow(row) << std::flush;
  });
  return kExitOk;
}

int RunOracle(const OracleArgs& args) {
  const gopac::ProblemInstance inst = LoadInstance(args.instance);
  gopac::GridOptions opt;
  opt.rot_step = args.rot_step;
  opt.trans_step = args.trans_step;
  opt.cell_cap = args.cell_cap;
  try {
    const gopac::GridResult r = gopac::GridSearch(inst, opt);
    Emit({{"instance_id", args.instance},
          {"nu", r.nu},
          {"pose", gopac::PoseToJson(r.pose)},
          {"cells", r.cells},
          {"rot_step", opt.rot_step},
          {"trans_step", opt.trans_step}},
         args.report);
  } catch (const gopac::CellCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCellCap;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Globally optimal camera pose and correspondence search"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
  solve_cmd->add_option("instance", solve.instance, "Instance JSON")->required();
  CLI::Option* theta_opt = solve_cmd->add_option(
      "--theta-deg", solve.theta_deg,
      "Inlier threshold in degrees (default: the instance value)");
  solve_cmd->add_option("--bound", solve.bound, "weak, tight or gamma")
      ->check(CLI::IsMember({"weak", "tight", "gamma"}));
  solve_cmd->add_option("--threads", solve.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--guess-verify", solve.guess_verify,
                      "Seed the best count optimistically");
  solve_cmd->add_option("--time-budget", solve.time_budget, "Seconds");
  solve_cmd->add_option("--seed", solve.seed, "Seed for randomised solvers");
  solve_cmd->add_option("--trace", solve.trace, "Write the bound trace CSV");
  CLI::Option* zeta_opt = solve_cmd->add_option(
      "--zeta", solve.zeta, "Minimum camera-to-point distance");
  solve_cmd->add_option("--solver", solve.solver, "gopac or ransac")
      ->check(CLI::IsMember({"gopac", "ransac"}));
  solve_cmd->add_option("--ransac-iterations", solve.ransac_iterations);
  solve_cmd->add_option("--precompute-depth", solve.precompute_depth,
                        "Rotation octree levels to cache")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--report", solve.report, "Report path (default stdout)");
  solve_cmd->add_option("--ground-truth", solve.ground_truth,
                        "Ground-truth JSON for success flags");

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate an instance");
  synth_cmd->add_option("config", synth.config, "Synth config JSON")->required();
  synth_cmd->add_option("--out", synth.out, "Instance output path");
  synth_cmd->add_option("--gt-out", synth.gt_out, "Ground-truth output path");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a parameter sweep");
  bench_cmd->add_option("sweep", bench.sweep, "Sweep config JSON")->required();
  bench_cmd->add_option("--out", bench.out, "CSV path (default stdout)");

  OracleArgs oracle;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Dense grid search");
  oracle_cmd->add_option("instance", oracle.instance, "Instance JSON")->required();
  oracle_cmd->add_option("--rot-step", oracle.rot_step, "Radians");
  oracle_cmd->add_option("--trans-step", oracle.trans_step, "Length units");
  oracle_cmd->add_option("--cell-cap", oracle.cell_cap, "Maximum grid cells");
  oracle_cmd->add_option("--report", oracle.report, "Report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (*solve_cmd) {
      return RunSolve(solve, theta_opt->count() > 0, zeta_opt->count() > 0);
    }
    if (*synth_cmd) return RunSynth(synth);
    if (*bench_cmd) return RunBench(bench);
    if (*oracle_cmd) return RunOracle(oracle);
  } catch (const gopac::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitOk;
}
