#ifndef GOPAC_ESTIMATORS_H_
#define GOPAC_ESTIMATORS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "gopac/bounds.h"
#include "gopac/solution.h"

namespace gopac {

struct RefineOptions {
  int max_iterations = 100;
  double cost_tolerance = 1e-10;  // stop when the cost changes less
};

struct RefineResult {
  Pose pose;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int iterations = 0;
  bool diverged = false;  // pose is the initial one
};

// Sum of angle(f_i, R (p_j - t)) over the pairs. Throws std::domain_error if
// a point coincides with the camera centre.
double AngularResidualSum(std::span<const Correspondence> corrs,
                          const ProblemInstance& inst, const Pose& pose);

// Damped Gauss-Newton on the summed angular residual, started at `init`.
// Each bearing residual is the rotation vector taking f to the transformed
// point, reweighted so that the squared sum equals the angle sum. Steps are
// only taken when the angle sum drops. Throws std::invalid_argument for fewer
// than three correspondences.
RefineResult RefinePnP(std::span<const Correspondence> corrs,
                       const ProblemInstance& inst, const Pose& init,
                       const RefineOptions& options = {});

// For every bearing with an inlier point at `pose`, its angularly closest
// inlier. The size equals Objective(pose, inst).
std::vector<Correspondence> ExtractCorrespondences(const Pose& pose,
                                                   const ProblemInstance& inst);

// Rotation R minimising sum |f_k - R u_k|^2 for unit directions.
Mat3 AlignDirections(std::span<const Vec3> from, std::span<const Vec3> to);

// Hypothesise-and-verify over random correspondence triples: 3 bearings and
// 3 points drawn uniformly, pose from a random camera centre in the domain
// aligned to the triple and refined, scored by the objective. Returns the best
// hypothesis with optimal = false; an empty Solution for zero iterations.
// Stops early once every bearing is an inlier.
Solution RansacBaseline(const ProblemInstance& inst, std::int64_t iterations,
                        std::uint64_t seed);

}  // namespace gopac

#endif  // GOPAC_ESTIMATORS_H_
