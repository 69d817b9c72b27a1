#include "gopac/bounds.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gopac/kernels.h"

namespace gopac {

std::string_view BoundModeName(BoundMode mode) {
  switch (mode) {
    case BoundMode::kWeakSphere:
      return "weak";
    case BoundMode::kTightCuboid:
      return "tight";
    case BoundMode::kGamma:
      return "gamma";
  }
  return "unknown";
}

BoundMode ParseBoundMode(std::string_view name) {
  if (name == "weak") return BoundMode::kWeakSphere;
  if (name == "tight") return BoundMode::kTightCuboid;
  if (name == "gamma") return BoundMode::kGamma;
  throw std::invalid_argument("unknown bound mode '" + std::string(name) +
                              "' (expected weak, tight or gamma)");
}

void ProblemInstance::Validate() const {
  if (!(theta > 0.0 && theta < kPi)) {
    throw std::invalid_argument("theta must lie in (0, pi)");
  }
  for (std::size_t i = 0; i < bearings.size(); ++i) {
    const Vec3& f = bearings[i];
    if (!f.allFinite() || std::abs(f.norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("bearing " + std::to_string(i) +
                                  " is not a finite unit vector");
    }
  }
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (!points[j].allFinite()) {
      throw std::invalid_argument("point " + std::to_string(j) +
                                  " is not finite");
    }
  }
  translation_domain.Validate();
}

bool IsInlierPair(const Vec3& f, const Vec3& p, const Mat3& rotation,
                  const Vec3& t, double theta) {
  const Vec3 x = rotation * (p - t);
  if (x.squaredNorm() == 0.0) return false;
  return AngularDistance(f, x) <= theta;
}

int Objective(const Pose& pose, const ProblemInstance& inst) {
  const Mat3 rotation = Rodrigues(pose.r);
  int count = 0;
  for (const Vec3& f : inst.bearings) {
    for (const Vec3& p : inst.points) {
      if (IsInlierPair(f, p, rotation, pose.t, inst.theta)) {
        ++count;
        break;
      }
    }
  }
  return count;
}

int LowerBound(const Pose& center, const ProblemInstance& inst) {
  return Objective(center, inst);
}

double PsiRotationWeak(const Cuboid& cube) {
  return std::min(cube.half_widths.norm(), kPi);
}

double PsiRotationTight(const Vec3& v, const Cuboid& cube, int pitch_divisor) {
  if (!(v.squaredNorm() > 0.0)) {
    throw std::domain_error("PsiRotationTight: zero vector");
  }
  const RotationSurfaceSampler sampler(cube, pitch_divisor);
  const Vec3 image = (Rodrigues(cube.center) * v).normalized();
  return sampler.BoundForward(v.normalized(), image);
}

double PsiRotationTightBearing(const Vec3& f, const Cuboid& cube,
                               int pitch_divisor) {
  if (!(f.squaredNorm() > 0.0)) {
    throw std::domain_error("PsiRotationTightBearing: zero vector");
  }
  const RotationSurfaceSampler sampler(cube, pitch_divisor);
  const Vec3 image = (Rodrigues(cube.center).transpose() * f).normalized();
  return sampler.BoundInverse(f.normalized(), image);
}

double PsiTranslation(const Vec3& p, const Cuboid& ct) {
  if (ct.Contains(p)) return kPi;
  const Vec3 axis = p - ct.center;
  double best = 0.0;
  for (const Vec3& t : Vertices(ct)) {
    best = std::max(best, AngularDistance(p - t, axis));
  }
  // Sublevel sets of the angle are convex cones only up to pi/2. Past that
  // the maximum can sit inside an edge, and it equals pi minus the smallest
  // angle between the axis and the box seen from p.
  if (best <= kPi / 2) return best;
  const double max_cos =
      MaxCosRayBox(axis.normalized(), ct.center - p, ct.half_widths);
  return std::max(best, std::acos(std::clamp(-max_cos, -1.0, 1.0)));
}

double PsiTranslationWeak(const Vec3& p, const Cuboid& ct) {
  const double rho = ct.half_widths.norm();
  const double d = (p - ct.center).norm();
  if (rho > d) return kPi;
  if (rho == 0.0) return 0.0;
  return std::asin(rho / d);
}

double MinAngleRayBox(const Vec3& f, const Cuboid& box) {
  if (box.Contains(Vec3::Zero()) || RayIntersectsBox(f, box)) return 0.0;
  double best = kPi;
  for (const Segment& edge : Skeleton(box)) {
    best = std::min(best, MinAngleRaySegment(f, edge.first, edge.second));
  }
  return best;
}

NestedBounds RotationCubeBounds(const Cuboid& cr, const Cuboid& ct,
                                const ProblemInstance& inst, BoundMode mode,
                                bool with_psi_t, int pitch_divisor) {
  const TranslationTerms trans =
      TranslationTerms::Build(inst.points, ct, mode, with_psi_t);
  RotationTermsBuffer buffer;
  buffer.Reset(cr, inst.bearings, mode, pitch_divisor);
  return CountCubeSerial(buffer.view(), trans, inst.theta);
}

int UpperBound(const Cuboid& cr, const Cuboid& ct, const ProblemInstance& inst,
               BoundMode mode, int pitch_divisor) {
  return RotationCubeBounds(cr, ct, inst, mode, /*with_psi_t=*/true,
                            pitch_divisor)
      .upper;
}

}  // namespace gopac
