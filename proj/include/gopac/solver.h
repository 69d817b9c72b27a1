#ifndef GOPAC_SOLVER_H_
#define GOPAC_SOLVER_H_

#include <cstdint>
#include <optional>

#include "gopac/bounds.h"
#include "gopac/rotation_cache.h"
#include "gopac/solution.h"

namespace gopac {

struct SolverConfig {
  BoundMode bound_mode = BoundMode::kGamma;
  // Overrides the instance's minimum camera-to-point distance when set.
  std::optional<double> zeta;
  int threads = 1;
  bool guess_verify = false;
  int precompute_depth = 5;
  std::optional<double> time_budget;  // seconds
  bool refine = true;
  int pitch_divisor = kDefaultPsiPitchDivisor;
  // Deepest rotation octree level that uses the sampled tight rotation angle
  // in the tight and gamma modes; deeper cubes use the sphere angle. Negative
  // disables it.
  int tight_rotation_max_level = 3;
  // Evaluate each cube's bearings with the OpenMP kernel.
  bool parallel_kernels = false;
  bool record_trace = true;
  // Cubes below these half-widths are not split further; their bound is kept
  // as a residual in the certificate.
  double min_rotation_half_width = 1e-9;
  double min_translation_half_width = 1e-9;

  // Throws std::invalid_argument.
  void Validate() const;
};

enum class QueueKind { kRotation, kTranslation };

// A cuboid waiting in one of the priority queues, with its cached bound.
struct QueueEntry {
  Cuboid cuboid;
  int bound = 0;
  QueueKind kind = QueueKind::kTranslation;
  RotationNode node;       // rotation entries only
  std::uint64_t seq = 0;   // insertion order, for deterministic ties
};

// Globally optimal pose and correspondences over the instance's translation
// domain and all rotations. Throws std::invalid_argument for an invalid
// instance or config, including an empty domain.
Solution GopacSolve(const ProblemInstance& inst, const SolverConfig& cfg);

// Seeds the best count at n = N - 1 and lowers it by ceil(N / 10) until a
// run certifies a pose at or above the seed.
Solution GuessAndVerify(const ProblemInstance& inst, const SolverConfig& cfg);

struct RbbResult {
  int nu = 0;
  Vec3 r = Vec3::Zero();
  bool timed_out = false;
  std::int64_t rotation_nodes = 0;
};

// Rotation search at a fixed camera centre t0 (ct absent) or relaxed over the
// cuboid ct. Without ct, nu is the best count over all rotations when it beats
// nu_best and nu_best otherwise; with ct, nu is an upper bound for ct, or
// nu_best when none exceeds it.
RbbResult Rbb(const ProblemInstance& inst, const Vec3& t0,
              const std::optional<Cuboid>& ct, int nu_best,
              const SolverConfig& cfg, const RotationCache* cache = nullptr);

// Local refinement fires when the best count is below twice the cuboid's
// centre count.
inline bool PnpTrigger(int nu_lower, int nu_star) {
  return nu_star < 2 * nu_lower;
}

// Guess-and-verify schedule: first seed and step.
inline int GuessInitialSeed(int n) { return n > 0 ? n - 1 : 0; }
inline int GuessStep(int n) { return n > 0 ? (n + 9) / 10 : 1; }

}  // namespace gopac

#endif  // GOPAC_SOLVER_H_
