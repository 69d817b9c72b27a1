#include "gopac/domain.h"

#include <stdexcept>

namespace gopac {

bool TranslationDomain::Contains(const Vec3& t) const {
  for (const Cuboid& c : cuboids) {
    if (c.Contains(t)) return true;
  }
  return false;
}

double TranslationDomain::TotalVolume() const {
  double v = 0.0;
  for (const Cuboid& c : cuboids) v += c.Volume();
  return v;
}

void TranslationDomain::Validate() const {
  if (cuboids.empty()) {
    throw std::invalid_argument("translation domain has no cuboids");
  }
  if (!(zeta > 0.0)) {
    throw std::invalid_argument("translation domain zeta must be positive");
  }
  for (const Cuboid& c : cuboids) {
    if (!c.center.allFinite() || !c.half_widths.allFinite() ||
        (c.half_widths.array() < 0.0).any()) {
      throw std::invalid_argument("translation cuboid is not finite/valid");
    }
  }
}

Cuboid RotationDomainCube() { return {Vec3::Zero(), Vec3::Constant(kPi)}; }

std::vector<Cuboid> Subdivide(const Cuboid& c) {
  if (!(c.MaxHalfWidth() > 0.0)) {
    throw std::domain_error("Subdivide: cuboid has zero extent");
  }
  std::vector<Cuboid> children;
  children.reserve(8);
  const Vec3 h = 0.5 * c.half_widths;
  for (int k = 0; k < 8; ++k) {
    Cuboid child{c.center, h};
    bool duplicate = false;
    for (int axis = 0; axis < 3; ++axis) {
      const bool upper = (k >> axis) & 1;
      if (c.half_widths[axis] == 0.0) {
        if (upper) duplicate = true;
        continue;
      }
      child.center[axis] += upper ? h[axis] : -h[axis];
    }
    if (!duplicate) children.push_back(child);
  }
  return children;
}

std::array<Vec3, 8> Vertices(const Cuboid& c) {
  std::array<Vec3, 8> v;
  for (int k = 0; k < 8; ++k) {
    for (int axis = 0; axis < 3; ++axis) {
      const double sign = ((k >> axis) & 1) ? 1.0 : -1.0;
      v[k][axis] = c.center[axis] + sign * c.half_widths[axis];
    }
  }
  return v;
}

std::array<Segment, 12> Skeleton(const Cuboid& c) {
  const std::array<Vec3, 8> v = Vertices(c);
  std::array<Segment, 12> edges;
  int n = 0;
  // Vertex k and k ^ (1 << axis) differ along one axis only.
  for (int axis = 0; axis < 3; ++axis) {
    for (int k = 0; k < 8; ++k) {
      if ((k >> axis) & 1) continue;
      edges[n++] = {v[k], v[k | (1 << axis)]};
    }
  }
  return edges;
}

double DistanceToCuboid(const Vec3& x, const Cuboid& c) {
  const Vec3 excess = ((x - c.center).cwiseAbs() - c.half_widths).cwiseMax(0.0);
  return excess.norm();
}

double FarthestDistance(const Vec3& x, const Cuboid& c) {
  return ((x - c.center).cwiseAbs() + c.half_widths).norm();
}

bool IntersectsPiBall(const Cuboid& c) {
  return DistanceToCuboid(Vec3::Zero(), c) <= kPi;
}

bool ViolatesZeta(const Cuboid& c, std::span<const Vec3> points,
                  double zeta) {
  for (const Vec3& p : points) {
    if (DistanceToCuboid(p, c) < zeta) return true;
  }
  return false;
}

bool InsideZetaBall(const Cuboid& c, std::span<const Vec3> points,
                    double zeta) {
  for (const Vec3& p : points) {
    if (FarthestDistance(p, c) < zeta) return true;
  }
  return false;
}

bool ZetaAdmissible(const Vec3& t, std::span<const Vec3> points,
                    double zeta) {
  for (const Vec3& p : points) {
    if ((p - t).norm() < zeta) return false;
  }
  return true;
}

}  // namespace gopac
