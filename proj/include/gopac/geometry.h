#ifndef GOPAC_GEOMETRY_H_
#define GOPAC_GEOMETRY_H_

#include <array>
#include <utility>

#include <Eigen/Dense>

namespace gopac {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

// Pinhole intrinsics in pixels.
struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
};

// Camera pose. The camera sees a world point p along R_r (p - t), so t is the
// camera centre and r the angle-axis vector of the world-to-camera rotation.
struct Pose {
  Vec3 r = Vec3::Zero();
  Vec3 t = Vec3::Zero();
};

// Axis-aligned box {x : |x_i - center_i| <= half_widths_i}.
struct Cuboid {
  Vec3 center = Vec3::Zero();
  Vec3 half_widths = Vec3::Zero();

  bool Contains(const Vec3& x) const;
  double Volume() const;
  double MaxHalfWidth() const { return half_widths.maxCoeff(); }
  Vec3 Min() const { return center - half_widths; }
  Vec3 Max() const { return center + half_widths; }
};

// Rotation matrix exp([r]_x).
Mat3 Rodrigues(const Vec3& r);

// Inverse of Rodrigues. The result lies in the closed pi-ball; on the
// pi-sphere the representative whose first nonzero component is positive is
// returned.
Vec3 AngleAxisFromMatrix(const Mat3& rotation);

// Maps any angle-axis vector to its canonical pi-ball representative.
Vec3 CanonicalRotationVec(const Vec3& r);

// Geodesic angle between two rotations, in [0, pi].
double RotationAngleBetween(const Mat3& a, const Mat3& b);

// Angle between two nonzero vectors, in [0, pi]. Throws std::domain_error for
// a zero vector.
double AngularDistance(const Vec3& u, const Vec3& v);

// Unit bearing K^-1 (u, v, 1) / norm.
Vec3 BearingFromPixel(const Intrinsics& intrinsics, const Eigen::Vector2d& px);

// Minimum angle between the direction f and the points of the segment [a, b].
// Throws std::domain_error if the segment passes through the origin.
double MinAngleRaySegment(const Vec3& f, const Vec3& a, const Vec3& b);

// True iff the ray {s f : s >= 0} meets the box.
bool RayIntersectsBox(const Vec3& f, const Cuboid& box);

}  // namespace gopac

#endif  // GOPAC_GEOMETRY_H_
