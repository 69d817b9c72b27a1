#include "gopac/oracle.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace gopac {
namespace {

// Multiples of step within [-limit, limit].
std::vector<double> SymmetricAxis(double limit, double step) {
  const int k = static_cast<int>(std::floor(limit / step + 1e-9));
  std::vector<double> values;
  values.reserve(2 * k + 1);
  for (int i = -k; i <= k; ++i) values.push_back(i * step);
  return values;
}

std::vector<Vec3> RotationGrid(double step) {
  const std::vector<double> axis = SymmetricAxis(kPi, step);
  std::vector<Vec3> out;
  for (double x : axis) {
    for (double y : axis) {
      for (double z : axis) {
        const Vec3 r(x, y, z);
        if (r.norm() <= kPi) out.push_back(r);
      }
    }
  }
  return out;
}

std::vector<Vec3> TranslationGrid(const TranslationDomain& domain,
                                  double step) {
  std::vector<Vec3> out;
  for (const Cuboid& c : domain.cuboids) {
    const std::vector<double> ax = SymmetricAxis(c.half_widths.x(), step);
    const std::vector<double> ay = SymmetricAxis(c.half_widths.y(), step);
    const std::vector<double> az = SymmetricAxis(c.half_widths.z(), step);
    for (double x : ax) {
      for (double y : ay) {
        for (double z : az) out.push_back(c.center + Vec3(x, y, z));
      }
    }
  }
  return out;
}

void CheckOptions(const GridOptions& opt) {
  if (!(opt.rot_step > 0.0) || !(opt.trans_step > 0.0)) {
    throw std::invalid_argument("grid steps must be positive");
  }
}

bool LexLess(const Pose& a, const Pose& b) {
  for (int i = 0; i < 3; ++i) {
    if (a.r[i] != b.r[i]) return a.r[i] < b.r[i];
  }
  for (int i = 0; i < 3; ++i) {
    if (a.t[i] != b.t[i]) return a.t[i] < b.t[i];
  }
  return false;
}

struct Best {
  int nu = -1;
  Pose pose;

  void Offer(int count, const Pose& p) {
    if (count > nu || (count == nu && LexLess(p, pose))) {
      nu = count;
      pose = p;
    }
  }
};

// Points relative to one camera centre, with their norms scaled by cos(theta).
struct CentreTerms {
  std::vector<Vec3> offsets;
  std::vector<double> scaled_norms;
};

std::vector<CentreTerms> PrecomputeCentres(const ProblemInstance& inst,
                                           const std::vector<Vec3>& centres) {
  const double c = std::cos(inst.theta);
  std::vector<CentreTerms> out(centres.size());
  for (std::size_t k = 0; k < centres.size(); ++k) {
    for (const Vec3& p : inst.points) {
      const Vec3 d = p - centres[k];
      const double n = d.norm();
      if (n == 0.0) continue;  // never an inlier
      out[k].offsets.push_back(d);
      out[k].scaled_norms.push_back(c * n);
    }
  }
  return out;
}

int CountAt(const std::vector<Vec3>& rotated, const CentreTerms& centre) {
  int count = 0;
  for (const Vec3& g : rotated) {
    for (std::size_t j = 0; j < centre.offsets.size(); ++j) {
      if (g.dot(centre.offsets[j]) >= centre.scaled_norms[j]) {
        ++count;
        break;
      }
    }
  }
  return count;
}

// Bearings that could match some point from some centre of a cuboid, using the
// enclosing-sphere cone of each point seen from the cuboid.
int ReachableBearings(const std::vector<Vec3>& rotated,
                      const ProblemInstance& inst, const Cuboid& c) {
  const double rho = c.half_widths.norm();
  int count = 0;
  for (const Vec3& g : rotated) {
    for (const Vec3& p : inst.points) {
      const Vec3 d = p - c.center;
      const double dist = d.norm();
      if (rho >= dist) {
        ++count;
        break;
      }
      const double widened = inst.theta + std::asin(rho / dist) + 1e-9;
      if (widened >= kPi ||
          std::acos(std::clamp(g.dot(d) / dist, -1.0, 1.0)) <= widened) {
        ++count;
        break;
      }
    }
  }
  return count;
}

// Uniform point of [-1, 1]^3 with `pinned` coordinates pushed to a face:
// 0 for the interior, 1 for a face, 2 for an edge.
Vec3 SampleUnitBox(std::mt19937_64& rng, int pinned) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec3 u;
  for (int a = 0; a < 3; ++a) u[a] = unit(rng);
  const int first = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int k = 0; k < pinned; ++k) {
    const int a = (first + k) % 3;
    u[a] = u[a] >= 0.0 ? 1.0 : -1.0;
  }
  return u;
}

GridResult Finalise(const ProblemInstance& inst, const Best& best,
                    std::int64_t cells) {
  GridResult out;
  out.cells = cells;
  out.pose = best.pose;
  out.nu = best.nu < 0 ? 0 : Objective(best.pose, inst);
  return out;
}

}  // namespace

CellCapExceeded::CellCapExceeded(std::int64_t cells, std::int64_t cap)
    : std::runtime_error("grid of " + std::to_string(cells) +
                         " cells exceeds the cap of " + std::to_string(cap)),
      cells_(cells) {}

std::int64_t GridCellCount(const ProblemInstance& inst,
                           const GridOptions& opt) {
  CheckOptions(opt);
  const std::int64_t rotations =
      static_cast<std::int64_t>(RotationGrid(opt.rot_step).size());
  std::int64_t centres = 0;
  for (const Cuboid& c : inst.translation_domain.cuboids) {
    std::int64_t n = 1;
    for (int a = 0; a < 3; ++a) {
      n *= 2 * static_cast<std::int64_t>(
                   std::floor(c.half_widths[a] / opt.trans_step + 1e-9)) +
           1;
    }
    centres += n;
  }
  return rotations * centres;
}

GridResult GridSearchSerial(const ProblemInstance& inst,
                            const GridOptions& opt) {
  const std::int64_t cells = GridCellCount(inst, opt);
  if (cells > opt.cell_cap) throw CellCapExceeded(cells, opt.cell_cap);
  const std::vector<Vec3> rotations = RotationGrid(opt.rot_step);
  const std::vector<Vec3> centres =
      TranslationGrid(inst.translation_domain, opt.trans_step);
  const std::vector<CentreTerms> terms = PrecomputeCentres(inst, centres);

  Best best;
  std::vector<Vec3> rotated(inst.bearings.size());
  for (const Vec3& r : rotations) {
    const Mat3 rt = Rodrigues(r).transpose();
    for (std::size_t i = 0; i < rotated.size(); ++i) {
      rotated[i] = rt * inst.bearings[i];
    }
    for (std::size_t k = 0; k < centres.size(); ++k) {
      best.Offer(CountAt(rotated, terms[k]), {r, centres[k]});
    }
  }
  return Finalise(inst, best, cells);
}

GridResult GridSearch(const ProblemInstance& inst, const GridOptions& opt) {
  if (!opt.parallel) return GridSearchSerial(inst, opt);
  const std::int64_t cells = GridCellCount(inst, opt);
  if (cells > opt.cell_cap) throw CellCapExceeded(cells, opt.cell_cap);
  const std::vector<Vec3> rotations = RotationGrid(opt.rot_step);
  const auto& cuboids = inst.translation_domain.cuboids;
  std::vector<std::vector<Vec3>> centres(cuboids.size());
  std::vector<std::vector<CentreTerms>> terms(cuboids.size());
  for (std::size_t c = 0; c < cuboids.size(); ++c) {
    TranslationDomain one;
    one.cuboids = {cuboids[c]};
    centres[c] = TranslationGrid(one, opt.trans_step);
    terms[c] = PrecomputeCentres(inst, centres[c]);
  }

  const long count = static_cast<long>(rotations.size());
  std::vector<Best> partial;
#pragma omp parallel
  {
    Best local;
    std::vector<Vec3> rotated(inst.bearings.size());
#pragma omp for schedule(dynamic, 64) nowait
    for (long q = 0; q < count; ++q) {
      const Vec3& r = rotations[q];
      const Mat3 rt = Rodrigues(r).transpose();
      for (std::size_t i = 0; i < rotated.size(); ++i) {
        rotated[i] = rt * inst.bearings[i];
      }
      for (std::size_t c = 0; c < cuboids.size(); ++c) {
        // A rotation that cannot tie the local best is skipped; ties are kept
        // so the lexicographic choice matches the serial search.
        if (ReachableBearings(rotated, inst, cuboids[c]) < local.nu) continue;
        for (std::size_t k = 0; k < centres[c].size(); ++k) {
          local.Offer(CountAt(rotated, terms[c][k]), {r, centres[c][k]});
        }
      }
    }
#pragma omp critical
    partial.push_back(local);
  }
  Best best;
  for (const Best& b : partial) {
    if (b.nu >= 0) best.Offer(b.nu, b.pose);
  }
  return Finalise(inst, best, cells);
}

double SampleMaxRotationAngle(const Vec3& v, const Cuboid& cube, int samples,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Vec3 ref = Rodrigues(cube.center) * v;
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec3 r = cube.center + SampleUnitBox(rng, s % 3).cwiseProduct(
                                     cube.half_widths);
    best = std::max(best, AngularDistance(Rodrigues(r) * v, ref));
  }
  return best;
}

double SampleMaxTranslationAngle(const Vec3& p, const Cuboid& ct, int samples,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Vec3 ref = p - ct.center;
  if (ref.squaredNorm() == 0.0) return kPi;
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec3 t =
        ct.center + SampleUnitBox(rng, s % 3).cwiseProduct(ct.half_widths);
    const Vec3 d = p - t;
    if (d.squaredNorm() == 0.0) continue;
    best = std::max(best, AngularDistance(d, ref));
  }
  return best;
}

}  // namespace gopac
