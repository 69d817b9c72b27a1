#include "gopac/domain.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

namespace gopac {
namespace {

bool HasCenter(const std::vector<Cuboid>& cs, const Vec3& c) {
  return std::any_of(cs.begin(), cs.end(), [&](const Cuboid& x) {
    return (x.center - c).norm() < 1e-12;
  });
}

TEST(Subdivide, SymmetricSplit) {
  const std::vector<Cuboid> kids = Subdivide({Vec3::Zero(), Vec3(2, 2, 2)});
  ASSERT_EQ(kids.size(), 8u);
  for (int k = 0; k < 8; ++k) {
    const Vec3 c((k & 1) ? 1 : -1, (k & 2) ? 1 : -1, (k & 4) ? 1 : -1);
    EXPECT_TRUE(HasCenter(kids, c)) << c.transpose();
  }
  for (const Cuboid& c : kids) EXPECT_EQ(c.half_widths, Vec3(1, 1, 1));
}

TEST(Subdivide, OffsetParent) {
  const std::vector<Cuboid> kids = Subdivide({Vec3(1, 0, 0), Vec3(1, 1, 1)});
  ASSERT_EQ(kids.size(), 8u);
  for (const Cuboid& c : kids) {
    EXPECT_NEAR(std::abs(c.center.x() - 1.0), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(c.center.y()), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(c.center.z()), 0.5, 1e-15);
  }
}

TEST(Subdivide, ChildrenTileParentVolume) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int k = 0; k < 100; ++k) {
    const Cuboid parent{Vec3(u(rng), -u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng))};
    double sum = 0.0;
    for (const Cuboid& c : Subdivide(parent)) {
      EXPECT_NEAR(c.Volume(), parent.Volume() / 8.0, 1e-12 * parent.Volume());
      sum += c.Volume();
      for (const Vec3& v : Vertices(c)) {
        EXPECT_TRUE(parent.Contains(v + 1e-12 * (parent.center - v)));
      }
    }
    EXPECT_NEAR(sum, parent.Volume(), 1e-9 * parent.Volume());
  }
}

TEST(Subdivide, FlatAxesAreKept) {
  const std::vector<Cuboid> kids = Subdivide({Vec3::Zero(), Vec3(4, 1, 0)});
  ASSERT_EQ(kids.size(), 4u);
  for (const Cuboid& c : kids) {
    EXPECT_EQ(c.half_widths, Vec3(2, 0.5, 0));
    EXPECT_EQ(c.center.z(), 0.0);
  }
  EXPECT_EQ(Subdivide({Vec3::Zero(), Vec3(0, 0, 1)}).size(), 2u);
  EXPECT_THROW(Subdivide({Vec3::Zero(), Vec3::Zero()}), std::domain_error);
}

TEST(Vertices, UnitCubeAndOffsetBox) {
  const auto unit = Vertices({Vec3::Zero(), Vec3(1, 1, 1)});
  for (const Vec3& v : unit) {
    EXPECT_EQ(v.cwiseAbs(), Vec3(1, 1, 1));
  }
  const std::vector<Cuboid> as_points = [&] {
    std::vector<Cuboid> out;
    for (const Vec3& v : unit) out.push_back({v, Vec3::Zero()});
    return out;
  }();
  for (int k = 0; k < 8; ++k) {
    const Vec3 c((k & 1) ? 1 : -1, (k & 2) ? 1 : -1, (k & 4) ? 1 : -1);
    EXPECT_TRUE(HasCenter(as_points, c));
  }
  for (const Vec3& v : Vertices({Vec3(5, 5, 5), Vec3(1, 2, 3)})) {
    EXPECT_EQ((v - Vec3(5, 5, 5)).cwiseAbs(), Vec3(1, 2, 3));
  }
}

TEST(Vertices, DegenerateAxisDuplicates) {
  const auto v = Vertices({Vec3::Zero(), Vec3(1, 0, 0)});
  int plus = 0;
  for (const Vec3& x : v) plus += x.x() > 0;
  EXPECT_EQ(plus, 4);
}

TEST(Skeleton, TwelveEdgesOfLengthTwo) {
  const auto edges = Skeleton({Vec3::Zero(), Vec3(1, 1, 1)});
  EXPECT_EQ(edges.size(), 12u);
  for (const Segment& e : edges) {
    EXPECT_NEAR((e.first - e.second).norm(), 2.0, 1e-15);
  }
  int collapsed = 0;
  for (const Segment& e : Skeleton({Vec3::Zero(), Vec3(1, 1, 0)})) {
    collapsed += (e.first - e.second).norm() == 0.0;
  }
  EXPECT_EQ(collapsed, 4);
}

TEST(Distances, NearAndFar) {
  const Cuboid c{Vec3::Zero(), Vec3(1, 1, 1)};
  EXPECT_DOUBLE_EQ(DistanceToCuboid(Vec3(0.5, 0, 0), c), 0.0);
  EXPECT_DOUBLE_EQ(DistanceToCuboid(Vec3(3, 0, 0), c), 2.0);
  EXPECT_NEAR(FarthestDistance(Vec3(3, 0, 0), c), std::sqrt(16.0 + 2.0), 1e-12);
}

TEST(IntersectsPiBall, RootFarCornerAndSurfacePoint) {
  EXPECT_TRUE(IntersectsPiBall(RotationDomainCube()));
  const Cuboid corner{Vec3::Constant(kPi * 7.0 / 8.0), Vec3::Constant(kPi / 8.0)};
  // Nearest corner sits at (3/4) pi per axis.
  EXPECT_NEAR(corner.Min().norm(), 0.75 * kPi * std::sqrt(3.0), 1e-12);
  EXPECT_FALSE(IntersectsPiBall(corner));
  EXPECT_TRUE(IntersectsPiBall({Vec3(kPi, 0, 0), Vec3::Zero()}));
}

TEST(Zeta, ViolationCases) {
  const Cuboid c{Vec3::Zero(), Vec3(1, 1, 1)};
  const std::vector<Vec3> inside{Vec3::Zero()};
  EXPECT_TRUE(ViolatesZeta(c, inside, 0.1));
  const std::vector<Vec3> far{Vec3(11, 0, 0)};
  EXPECT_FALSE(ViolatesZeta(c, far, 1.0));
  const std::vector<Vec3> at_zeta{Vec3(1.5, 0, 0)};
  EXPECT_FALSE(ViolatesZeta(c, at_zeta, 0.5));
  EXPECT_TRUE(ViolatesZeta(c, at_zeta, 0.5000001));
}

TEST(Zeta, InsideBallAndAdmissibility) {
  const std::vector<Vec3> p{Vec3::Zero()};
  EXPECT_TRUE(InsideZetaBall({Vec3::Zero(), Vec3::Constant(0.1)}, p, 1.0));
  EXPECT_FALSE(InsideZetaBall({Vec3::Zero(), Vec3::Constant(1.0)}, p, 1.0));
  EXPECT_TRUE(ZetaAdmissible(Vec3(1, 0, 0), p, 1.0));
  EXPECT_FALSE(ZetaAdmissible(Vec3(0.5, 0, 0), p, 1.0));
}

TEST(TranslationDomain, ValidateAndContains) {
  TranslationDomain d;
  EXPECT_THROW(d.Validate(), std::invalid_argument);
  d.cuboids.push_back({Vec3::Zero(), Vec3::Constant(1)});
  d.cuboids.push_back({Vec3(5, 0, 0), Vec3::Constant(1)});
  EXPECT_NO_THROW(d.Validate());
  EXPECT_TRUE(d.Contains(Vec3(5.5, 0, 0)));
  EXPECT_FALSE(d.Contains(Vec3(2.5, 0, 0)));
  EXPECT_DOUBLE_EQ(d.TotalVolume(), 16.0);
  d.zeta = 0.0;
  EXPECT_THROW(d.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace gopac
