#ifndef GOPAC_ORACLE_H_
#define GOPAC_ORACLE_H_

#include <cstdint>
#include <stdexcept>

#include "gopac/bounds.h"

namespace gopac {

// Thrown when a grid search would evaluate more cells than allowed.
class CellCapExceeded : public std::runtime_error {
 public:
  CellCapExceeded(std::int64_t cells, std::int64_t cap);
  std::int64_t cells() const { return cells_; }

 private:
  std::int64_t cells_;
};

struct GridOptions {
  double rot_step = 0.1;    // radians
  double trans_step = 0.1;  // length units
  std::int64_t cell_cap = 10'000'000;
  bool parallel = true;  // OpenMP over rotations
};

struct GridResult {
  int nu = 0;
  Pose pose;
  std::int64_t cells = 0;
};

// Grid: rotations k * rot_step per axis inside the closed pi-ball; camera
// centres centre + k * trans_step per axis inside each domain cuboid. Both
// contain the centre, and halving a step yields a superset grid.
std::int64_t GridCellCount(const ProblemInstance& inst, const GridOptions& opt);

// Best objective over the grid. Ties go to the lexicographically smallest
// (r, t). Throws CellCapExceeded and std::invalid_argument for steps <= 0.
// The parallel path skips rotations that provably cannot reach the best count
// so far; the serial path evaluates every cell.
GridResult GridSearch(const ProblemInstance& inst, const GridOptions& opt);
GridResult GridSearchSerial(const ProblemInstance& inst,
                            const GridOptions& opt);

// Largest angle(R_r v, R_c v) over random r in the cube (interior, faces and
// edges); never above the true maximum.
double SampleMaxRotationAngle(const Vec3& v, const Cuboid& cube, int samples,
                              std::uint64_t seed = 1);

// Largest angle(p - t, p - t0) over random t in the cuboid.
double SampleMaxTranslationAngle(const Vec3& p, const Cuboid& ct, int samples,
                                 std::uint64_t seed = 1);

}  // namespace gopac

#endif  // GOPAC_ORACLE_H_
