#include "gopac/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Geometry>

namespace gopac {
namespace {

Mat3 Skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

// Below this angle the closed form is replaced by its second-order expansion.
constexpr double kSmallAngle = 1e-8;

}  // namespace

bool Cuboid::Contains(const Vec3& x) const {
  return ((x - center).cwiseAbs().array() <= half_widths.array()).all();
}

double Cuboid::Volume() const {
  return 8.0 * half_widths.x() * half_widths.y() * half_widths.z();
}

Mat3 Rodrigues(const Vec3& r) {
  const double angle = r.norm();
  const Mat3 k = Skew(r);
  if (angle < kSmallAngle) {
    return Mat3::Identity() + k + 0.5 * k * k;
  }
  const double s = std::sin(angle) / angle;
  const double c = (1.0 - std::cos(angle)) / (angle * angle);
  return Mat3::Identity() + s * k + c * k * k;
}

Vec3 AngleAxisFromMatrix(const Mat3& rotation) {
  const Eigen::AngleAxisd aa(rotation);
  double angle = aa.angle();
  Vec3 axis = aa.axis();
  if (angle > kPi) {
    angle = 2.0 * kPi - angle;
    axis = -axis;
  }
  Vec3 r = angle * axis;
  if (std::abs(angle - kPi) <= 1e-12) {
    for (int i = 0; i < 3; ++i) {
      if (std::abs(r[i]) > 1e-12) {
        if (r[i] < 0.0) r = -r;
        break;
      }
    }
  }
  return r;
}

Vec3 CanonicalRotationVec(const Vec3& r) {
  if (r.norm() < kPi - 1e-9) return r;
  return AngleAxisFromMatrix(Rodrigues(r));
}

double RotationAngleBetween(const Mat3& a, const Mat3& b) {
  return Eigen::AngleAxisd(a.transpose() * b).angle();
}

double AngularDistance(const Vec3& u, const Vec3& v) {
  const double nu = u.squaredNorm();
  const double nv = v.squaredNorm();
  if (!(nu > 0.0) || !(nv > 0.0)) {
    throw std::domain_error("AngularDistance: zero-length vector");
  }
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

Vec3 BearingFromPixel(const Intrinsics& intrinsics,
                      const Eigen::Vector2d& px) {
  const Vec3 ray((px.x() - intrinsics.cx) / intrinsics.fx,
                 (px.y() - intrinsics.cy) / intrinsics.fy, 1.0);
  return ray.normalized();
}

double MinAngleRaySegment(const Vec3& f, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double dd = d.squaredNorm();
  const double scale = std::max(a.norm(), b.norm());
  if (!(scale > 0.0)) {
    throw std::domain_error("MinAngleRaySegment: degenerate segment at origin");
  }
  // Closest point of the segment to the origin.
  const double s_close =
      dd > 0.0 ? std::clamp(-a.dot(d) / dd, 0.0, 1.0) : 0.0;
  if ((a + s_close * d).norm() <= 1e-14 * scale) {
    throw std::domain_error("MinAngleRaySegment: segment passes through origin");
  }

  double best = AngularDistance(f, a);
  if (dd == 0.0) return best;
  best = std::min(best, AngularDistance(f, b));

  // d/ds of (f.x)/|x| vanishes where
  //   (f.d)(x.x) - (f.x)(x.d) = 0, which is linear in s for x = a + s d.
  const double fa = f.dot(a);
  const double fd = f.dot(d);
  const double aa = a.squaredNorm();
  const double ad = a.dot(d);
  const double denom = fd * ad - fa * dd;
  if (denom != 0.0) {
    const double s = (fa * ad - fd * aa) / denom;
    if (s > 0.0 && s < 1.0) {
      best = std::min(best, AngularDistance(f, a + s * d));
    }
  }
  return best;
}

bool RayIntersectsBox(const Vec3& f, const Cuboid& box) {
  double s_min = 0.0;
  double s_max = std::numeric_limits<double>::infinity();
  const Vec3 lo = box.Min();
  const Vec3 hi = box.Max();
  for (int i = 0; i < 3; ++i) {
    if (f[i] == 0.0) {
      if (lo[i] > 0.0 || hi[i] < 0.0) return false;
      continue;
    }
    double s0 = lo[i] / f[i];
    double s1 = hi[i] / f[i];
    if (s0 > s1) std::swap(s0, s1);
    s_min = std::max(s_min, s0);
    s_max = std::min(s_max, s1);
    if (s_min > s_max) return false;
  }
  return true;
}

}  // namespace gopac
