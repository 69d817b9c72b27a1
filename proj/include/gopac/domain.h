#ifndef GOPAC_DOMAIN_H_
#define GOPAC_DOMAIN_H_

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "gopac/geometry.h"

namespace gopac {

using Segment = std::pair<Vec3, Vec3>;

// Camera-centre search region: a union of cuboids, restricted to keep every
// scene point at least `zeta` away from the camera centre.
struct TranslationDomain {
  std::vector<Cuboid> cuboids;
  double zeta = 1e-3;

  bool Contains(const Vec3& t) const;
  double TotalVolume() const;
  // Throws std::invalid_argument when empty or zeta <= 0.
  void Validate() const;
};

// The cube [-pi, pi]^3 circumscribing the ball of angle-axis vectors.
Cuboid RotationDomainCube();

// Octree split. Axes with zero half-width are not split, so a cuboid with k
// nonzero axes has 2^k children. Throws std::domain_error when all
// half-widths are zero.
std::vector<Cuboid> Subdivide(const Cuboid& c);

std::array<Vec3, 8> Vertices(const Cuboid& c);

// The twelve edges. Edges along a zero-width axis collapse to points.
std::array<Segment, 12> Skeleton(const Cuboid& c);

// Distance from x to the closest point of c (zero inside).
double DistanceToCuboid(const Vec3& x, const Cuboid& c);

// Distance from x to the farthest point of c.
double FarthestDistance(const Vec3& x, const Cuboid& c);

// True iff the point of c nearest the origin has norm <= pi.
bool IntersectsPiBall(const Cuboid& c);

// True iff some point lies strictly closer than zeta to the cuboid.
bool ViolatesZeta(const Cuboid& c, std::span<const Vec3> points, double zeta);

// True iff the whole cuboid is strictly within zeta of a single point, so it
// holds no admissible camera centre.
bool InsideZetaBall(const Cuboid& c, std::span<const Vec3> points,
                    double zeta);

// True iff every point is at least zeta from t.
bool ZetaAdmissible(const Vec3& t, std::span<const Vec3> points, double zeta);

}  // namespace gopac

#endif  // GOPAC_DOMAIN_H_
