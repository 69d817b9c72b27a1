#ifndef GOPAC_BOUNDS_H_
#define GOPAC_BOUNDS_H_

#include <string>
#include <string_view>
#include <vector>

#include "gopac/domain.h"
#include "gopac/geometry.h"

namespace gopac {

// Upper-bound family used during the search.
//   kWeakSphere:  sphere-enclosing rotation and translation angles.
//   kTightCuboid: cuboid-exact rotation and translation angles.
//   kGamma:       cuboid-exact rotation angle, translation handled by the
//                 exact ray-to-box angle.
enum class BoundMode { kWeakSphere, kTightCuboid, kGamma };

std::string_view BoundModeName(BoundMode mode);
// Accepts "weak", "tight" and "gamma". Throws std::invalid_argument.
BoundMode ParseBoundMode(std::string_view name);

struct ProblemInstance {
  std::vector<Vec3> bearings;  // unit vectors, size N
  std::vector<Vec3> points;    // size M
  double theta = kPi / 180.0;  // inlier threshold (radians)
  TranslationDomain translation_domain;

  int num_bearings() const { return static_cast<int>(bearings.size()); }
  int num_points() const { return static_cast<int>(points.size()); }

  // Throws std::invalid_argument on a bad threshold, non-unit or non-finite
  // bearings, non-finite points, or an invalid translation domain.
  void Validate() const;
};

// Default divisor for the surface sampling pitch used by the tight rotation
// angle: pitch = half-width / divisor.
inline constexpr int kDefaultPsiPitchDivisor = 8;

// Number of bearings with at least one point within theta of it at `pose`.
// A point coinciding with the camera centre never counts.
int Objective(const Pose& pose, const ProblemInstance& inst);

// True iff angle(f, R (p - t)) <= theta. False when p == t.
bool IsInlierPair(const Vec3& f, const Vec3& p, const Mat3& rotation,
                  const Vec3& t, double theta);

// Objective at the centre of a domain.
int LowerBound(const Pose& center, const ProblemInstance& inst);

// min(|half-widths|, pi); for a cube of half-width d this is min(sqrt(3) d, pi).
double PsiRotationWeak(const Cuboid& cube);

// Certified bound on max_{r in cube} angle(R_r v, R_c v), c the cube centre.
// Evaluated on a surface grid of pitch half-width / pitch_divisor plus the
// largest distance from a surface point to its nearest grid node, and clamped
// by PsiRotationWeak. Throws std::domain_error for v == 0.
double PsiRotationTight(const Vec3& v, const Cuboid& cube,
                        int pitch_divisor = kDefaultPsiPitchDivisor);

// Same bound for a bearing under inverse rotations:
// max_{r in cube} angle(R_r^T f, R_c^T f).
double PsiRotationTightBearing(const Vec3& f, const Cuboid& cube,
                               int pitch_divisor = kDefaultPsiPitchDivisor);

// max_{t in ct} angle(p - t, p - t0): pi when p lies in ct, the vertex
// maximum while that stays within pi/2, and the exact edge maximum beyond.
double PsiTranslation(const Vec3& p, const Cuboid& ct);

// asin(rho / |p - t0|) with rho = |half-widths|, or pi when rho exceeds the
// distance.
double PsiTranslationWeak(const Vec3& p, const Cuboid& ct);

// Minimum angle between direction f and a box. Zero if the ray meets the box
// or the box contains the origin.
double MinAngleRayBox(const Vec3& f, const Cuboid& box);

struct NestedBounds {
  int lower = 0;
  int upper = 0;
};

// Bounds over the rotation cube cr for the nested rotation search.
//   with_psi_t == false: translation fixed at ct.center; lower is the
//     objective at (cr.center, ct.center) and upper adds the rotation angle.
//   with_psi_t == true: lower and upper additionally maximise over t in ct,
//     through the translation angle (weak/tight) or the ray-to-box angle
//     (gamma).
NestedBounds RotationCubeBounds(const Cuboid& cr, const Cuboid& ct,
                                const ProblemInstance& inst, BoundMode mode,
                                bool with_psi_t,
                                int pitch_divisor = kDefaultPsiPitchDivisor);

// Upper bound on the objective over cr x ct.
int UpperBound(const Cuboid& cr, const Cuboid& ct, const ProblemInstance& inst,
               BoundMode mode, int pitch_divisor = kDefaultPsiPitchDivisor);

}  // namespace gopac

#endif  // GOPAC_BOUNDS_H_
