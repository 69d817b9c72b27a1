#ifndef GOPAC_SYNTH_H_
#define GOPAC_SYNTH_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gopac/bounds.h"
#include "gopac/solution.h"

namespace gopac {

// Camera centres lie on a torus around the z-axis, centred at the origin.
struct TorusPrior {
  double major_radius = 5.5;
  double minor_radius = 0.25;
  int cube_count = 24;
  // Defaults to the smallest value that provably covers the torus.
  std::optional<double> cube_half_width;
};

enum class SceneKind {
  kUniform,  // M points uniform in [-1, 1]^3
  kLattice,  // the 27 points of {-1, 0, 1}^3; num_points is ignored
};

struct SynthConfig {
  int num_points = 20;
  SceneKind scene = SceneKind::kUniform;
  double omega_3d = 0.0;  // share of points occluded
  double omega_2d = 0.0;  // share of bearings that are clutter
  double sigma_px = 2.0;
  Intrinsics intrinsics = DefaultIntrinsics();
  int image_width = 640;
  int image_height = 480;
  TorusPrior prior;
  // Replaces the torus cubes as the solver's translation domain.
  std::optional<TranslationDomain> domain;
  double theta = kPi / 180.0;
  double zeta = 1e-3;
  std::uint64_t seed = 0;

  // 640 x 480 pixels with a 60 degree horizontal field of view.
  static Intrinsics DefaultIntrinsics();
  // Throws std::invalid_argument.
  void Validate() const;
};

struct GroundTruth {
  Pose pose;
  std::vector<Correspondence> inlier_matching;
  std::vector<bool> point_occluded;
  std::vector<bool> bearing_outlier;
};

// Throws std::invalid_argument when no point remains visible.
std::pair<ProblemInstance, GroundTruth> Generate(const SynthConfig& cfg);

// Cubes at evenly spaced stations on the torus centreline.
TranslationDomain TorusDomain(const TorusPrior& prior, double zeta);
double TorusCoverHalfWidth(const TorusPrior& prior);

struct PoseSuccessFlags {
  bool rot_ok = false;
  bool trans_ok = false;
  // The reference centre was the origin, so the absolute error was used.
  bool absolute_fallback = false;
};

// Rotation error below 0.1 rad and relative centre error below 0.1.
PoseSuccessFlags PoseSuccess(const Pose& est, const Pose& gt);

}  // namespace gopac

#endif  // GOPAC_SYNTH_H_
