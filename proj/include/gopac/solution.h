#ifndef GOPAC_SOLUTION_H_
#define GOPAC_SOLUTION_H_

#include <cstdint>
#include <vector>

#include "gopac/geometry.h"

namespace gopac {

// A bearing paired with the scene point it observes.
struct Correspondence {
  int bearing_index = 0;
  int point_index = 0;

  bool operator==(const Correspondence&) const = default;
};

// One snapshot of the search: best attained count, global bound, share of the
// translation domain still queued, and the queue length.
struct TraceSample {
  double wall_time = 0.0;
  int lower = 0;
  int upper = 0;
  double remaining_volume = 0.0;
  int queue_size = 0;
};

struct SolverStats {
  std::int64_t translation_nodes = 0;
  std::int64_t rotation_nodes = 0;
  std::int64_t refinements = 0;
  int guess_rounds = 0;
};

struct Solution {
  int nu_star = 0;
  Pose pose;
  std::vector<Correspondence> correspondences;
  bool optimal = false;  // terminated by the bound rather than the budget
  std::vector<TraceSample> trace;
  double wall_time = 0.0;
  SolverStats stats;
};

}  // namespace gopac

#endif  // GOPAC_SOLUTION_H_
