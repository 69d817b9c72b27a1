#include "gopac/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "gopac/estimators.h"

namespace gopac {
namespace {

void ApplyParam(const std::string& param, double value, SynthConfig* cfg) {
  if (param == "omega_2d") {
    cfg->omega_2d = value;
  } else if (param == "omega_3d") {
    cfg->omega_3d = value;
  } else if (param == "num_points") {
    cfg->num_points = static_cast<int>(std::lround(value));
  } else if (param == "sigma_px") {
    cfg->sigma_px = value;
  } else if (param == "theta_deg") {
    cfg->theta = value * kPi / 180.0;
  } else {
    throw FormatError("param", "unknown sweep parameter '" + param + "'");
  }
}

}  // namespace

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

TrialResult RunTrial(const SynthConfig& synth, const MethodConfig& method) {
  auto [inst, truth] = Generate(synth);
  TrialResult out;
  const auto start = std::chrono::steady_clock::now();
  if (method.method == Method::kGopac) {
    out.solution = GopacSolve(inst, method.solver);
  } else {
    out.solution = RansacBaseline(inst, method.ransac_iterations,
                                  method.ransac_seed ^ synth.seed);
  }
  out.runtime_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  out.reference_inliers = Objective(truth.pose, inst);
  out.succ_inliers = out.solution.nu_star >= out.reference_inliers;
  const PoseSuccessFlags flags = PoseSuccess(out.solution.pose, truth.pose);
  out.succ_pose = flags.rot_ok && flags.trans_ok;
  out.truth = std::move(truth);
  return out;
}

SweepConfig SweepConfigFromJson(const Json& j) {
  if (!j.is_object()) throw FormatError("sweep", "expected an object");
  SweepConfig cfg;
  const auto param = j.find("param");
  if (param == j.end() || !param->is_string()) {
    throw FormatError("param", "expected a string");
  }
  cfg.param = param->get<std::string>();
  const auto values = j.find("values");
  if (values == j.end() || !values->is_array() || values->empty()) {
    throw FormatError("values", "expected a non-empty array of numbers");
  }
  for (std::size_t k = 0; k < values->size(); ++k) {
    if (!(*values)[k].is_number()) {
      throw FormatError("values[" + std::to_string(k) + "]", "expected a number");
    }
    cfg.values.push_back((*values)[k].get<double>());
  }
  if (const auto it = j.find("trials"); it != j.end()) {
    if (!it->is_number_integer() || it->get<int>() < 1) {
      throw FormatError("trials", "expected a positive integer");
    }
    cfg.trials = it->get<int>();
  }
  if (const auto it = j.find("base"); it != j.end()) {
    cfg.base = SynthConfigFromJson(*it);
  }
  for (double v : cfg.values) {
    SynthConfig probe = cfg.base;
    ApplyParam(cfg.param, v, &probe);
  }
  if (const auto it = j.find("method"); it != j.end()) {
    if (*it == "gopac") {
      cfg.method.method = Method::kGopac;
    } else if (*it == "ransac") {
      cfg.method.method = Method::kRansac;
    } else {
      throw FormatError("method", "expected \"gopac\" or \"ransac\"");
    }
  }
  if (const auto it = j.find("solver"); it != j.end()) {
    SolverConfig& s = cfg.method.solver;
    if (const auto b = it->find("bound"); b != it->end()) {
      try {
        s.bound_mode = ParseBoundMode(b->get<std::string>());
      } catch (const std::exception& e) {
        throw FormatError("solver.bound", e.what());
      }
    }
    if (const auto t = it->find("threads"); t != it->end()) s.threads = t->get<int>();
    if (const auto g = it->find("guess_verify"); g != it->end()) {
      s.guess_verify = g->get<bool>();
    }
    if (const auto tb = it->find("time_budget"); tb != it->end()) {
      s.time_budget = tb->get<double>();
    }
    if (const auto d = it->find("precompute_depth"); d != it->end()) {
      s.precompute_depth = d->get<int>();
    }
    try {
      s.Validate();
    } catch (const std::invalid_argument& e) {
      throw FormatError("solver", e.what());
    }
  }
  if (const auto it = j.find("ransac_iterations"); it != j.end()) {
    cfg.method.ransac_iterations = it->get<std::int64_t>();
  }
  return cfg;
}

std::vector<SweepRow> RunSweep(
    const SweepConfig& cfg, const std::function<void(const SweepRow&)>& on_row) {
  std::vector<SweepRow> rows;
  for (std::size_t v = 0; v < cfg.values.size(); ++v) {
    SweepRow row;
    row.param = cfg.param;
    row.value = cfg.values[v];
    row.trials = cfg.trials;
    std::vector<double> runtimes;
    int inliers = 0;
    int poses = 0;
    for (int k = 0; k < cfg.trials; ++k) {
      SynthConfig synth = cfg.base;
      ApplyParam(cfg.param, cfg.values[v], &synth);
      synth.seed = cfg.base.seed + 1000 * v + k;
      const TrialResult r = RunTrial(synth, cfg.method);
      inliers += r.succ_inliers;
      poses += r.succ_pose;
      runtimes.push_back(r.runtime_s);
    }
    row.succ_inliers = static_cast<double>(inliers) / cfg.trials;
    row.succ_pose = static_cast<double>(poses) / cfg.trials;
    row.median_runtime_s = Median(runtimes);
    rows.push_back(row);
    if (on_row) on_row(row);
  }
  return rows;
}

std::string SweepCsvHeader() {
  return "param,value,trials,succ_inliers,succ_pose,median_runtime_s\n";
}

std::string SweepCsvRow(const SweepRow& row) {
  std::ostringstream out;
  out << row.param << ',' << row.value << ',' << row.trials << ','
      << row.succ_inliers << ',' << row.succ_pose << ',' << row.median_runtime_s
      << '\n';
  return out.str();
}

}  // namespace gopac
