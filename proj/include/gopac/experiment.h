#ifndef GOPAC_EXPERIMENT_H_
#define GOPAC_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gopac/io.h"
#include "gopac/solver.h"
#include "gopac/synth.h"

namespace gopac {

enum class Method { kGopac, kRansac };

struct MethodConfig {
  Method method = Method::kGopac;
  SolverConfig solver;
  std::int64_t ransac_iterations = 10000;
  std::uint64_t ransac_seed = 0;
};

struct TrialResult {
  Solution solution;
  GroundTruth truth;
  int reference_inliers = 0;  // objective at the generating pose
  bool succ_inliers = false;  // nu_star >= reference_inliers
  bool succ_pose = false;
  double runtime_s = 0.0;
};

TrialResult RunTrial(const SynthConfig& synth, const MethodConfig& method);

// A one-parameter sweep over synthetic trials.
struct SweepConfig {
  std::string param;  // omega_2d, omega_3d, num_points, sigma_px, theta_deg
  std::vector<double> values;
  int trials = 1;
  SynthConfig base;
  MethodConfig method;
};

struct SweepRow {
  std::string param;
  double value = 0.0;
  int trials = 0;
  double succ_inliers = 0.0;
  double succ_pose = 0.0;
  double median_runtime_s = 0.0;
};

// Throws FormatError.
SweepConfig SweepConfigFromJson(const Json& j);

// Trial k of value v uses seed base.seed + 1000 * v_index + k. `on_row` runs
// after each value so callers can persist partial results.
std::vector<SweepRow> RunSweep(const SweepConfig& cfg,
                               const std::function<void(const SweepRow&)>& on_row);

std::string SweepCsvHeader();
std::string SweepCsvRow(const SweepRow& row);

double Median(std::vector<double> values);

}  // namespace gopac

#endif  // GOPAC_EXPERIMENT_H_
