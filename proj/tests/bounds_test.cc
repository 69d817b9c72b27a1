#include "gopac/bounds.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "gopac/oracle.h"
#include "gopac/synth.h"

namespace gopac {
namespace {

Vec3 RandomUnit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

Vec3 RandomIn(const Cuboid& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return c.center + Vec3(u(rng), u(rng), u(rng)).cwiseProduct(c.half_widths);
}

// Points in [-1,1]^3 + (0,0,4) seen from near the origin, with random clutter.
ProblemInstance RandomInstance(std::mt19937_64& rng, int n, int m,
                               double theta) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ProblemInstance inst;
  inst.theta = theta;
  for (int j = 0; j < m; ++j) inst.points.emplace_back(u(rng), u(rng), 4 + u(rng));
  const Mat3 rotation = Rodrigues(0.3 * RandomUnit(rng));
  const Vec3 t(0.2 * u(rng), 0.2 * u(rng), 0.2 * u(rng));
  for (int i = 0; i < n; ++i) {
    if (i < m && i % 2 == 0) {
      inst.bearings.push_back((rotation * (inst.points[i] - t)).normalized());
    } else {
      inst.bearings.push_back((Vec3(0.3 * u(rng), 0.3 * u(rng), 1)).normalized());
    }
  }
  inst.translation_domain.cuboids.push_back({Vec3::Zero(), Vec3::Constant(1)});
  return inst;
}

ProblemInstance Single(const Vec3& f, const Vec3& p, double theta) {
  ProblemInstance inst;
  inst.bearings.push_back(f.normalized());
  inst.points.push_back(p);
  inst.theta = theta;
  inst.translation_domain.cuboids.push_back({Vec3::Zero(), Vec3::Constant(1)});
  return inst;
}

TEST(BoundMode, NamesRoundTrip) {
  for (BoundMode m :
       {BoundMode::kWeakSphere, BoundMode::kTightCuboid, BoundMode::kGamma}) {
    EXPECT_EQ(ParseBoundMode(BoundModeName(m)), m);
  }
  EXPECT_THROW(ParseBoundMode("sphere"), std::invalid_argument);
}

TEST(ProblemInstance, ValidateRejectsBadInput) {
  ProblemInstance inst = Single(Vec3::UnitZ(), Vec3(0, 0, 5), 0.01);
  EXPECT_NO_THROW(inst.Validate());
  inst.theta = 0.0;
  EXPECT_THROW(inst.Validate(), std::invalid_argument);
  inst.theta = 0.01;
  inst.bearings[0] = Vec3(0, 0, 2);
  EXPECT_THROW(inst.Validate(), std::invalid_argument);
  inst.bearings[0] = Vec3::UnitZ();
  inst.points[0].x() = std::nan("");
  EXPECT_THROW(inst.Validate(), std::invalid_argument);
}

TEST(Objective, PerfectAlignmentCountsEveryBearing) {
  SynthConfig cfg;
  cfg.num_points = 12;
  cfg.sigma_px = 0.0;
  cfg.seed = 4;
  const auto [inst, gt] = Generate(cfg);
  EXPECT_EQ(Objective(gt.pose, inst), inst.num_bearings());
  EXPECT_EQ(LowerBound(gt.pose, inst), inst.num_bearings());
}

TEST(Objective, EmptyBearingsGiveZero) {
  ProblemInstance inst = Single(Vec3::UnitZ(), Vec3(0, 0, 5), 0.01);
  inst.bearings.clear();
  EXPECT_EQ(Objective(Pose{}, inst), 0);
}

TEST(Objective, OutsideThresholdDoesNotCount) {
  const double theta = 0.05;
  const Vec3 f(std::sin(2 * theta), 0, std::cos(2 * theta));
  EXPECT_EQ(Objective(Pose{}, Single(f, Vec3(0, 0, 5), theta)), 0);
}

TEST(Objective, ThresholdIsClosed) {
  const Vec3 f(std::sin(0.25), 0, std::cos(0.25));
  const ProblemInstance inst = Single(f, Vec3(0, 0, 5), 1.0);
  const double angle = AngularDistance(inst.bearings[0], Vec3(0, 0, 5));
  ProblemInstance exact = inst;
  exact.theta = angle;
  EXPECT_EQ(Objective(Pose{}, exact), 1);
  exact.theta = std::nextafter(angle, 0.0);
  EXPECT_EQ(Objective(Pose{}, exact), 0);
}

TEST(Objective, PointAtCameraCentreNeverCounts) {
  const ProblemInstance inst = Single(Vec3::UnitZ(), Vec3(0.5, 0, 0), 3.0);
  EXPECT_EQ(Objective({Vec3::Zero(), Vec3(0.5, 0, 0)}, inst), 0);
}

TEST(Objective, BearingCountsOnceWithManyPoints) {
  ProblemInstance inst = Single(Vec3::UnitZ(), Vec3(0, 0, 5), 0.1);
  inst.points.push_back(Vec3(0, 0, 7));
  inst.points.push_back(Vec3(0.01, 0, 6));
  EXPECT_EQ(Objective(Pose{}, inst), 1);
}

TEST(PsiRotationWeak, Examples) {
  EXPECT_DOUBLE_EQ(PsiRotationWeak({Vec3::Zero(), Vec3::Zero()}), 0.0);
  EXPECT_DOUBLE_EQ(PsiRotationWeak({Vec3::Zero(), Vec3::Constant(kPi)}), kPi);
  EXPECT_NEAR(PsiRotationWeak({Vec3::Zero(), Vec3::Constant(0.1)}), 0.173205,
              1e-6);
}

TEST(PsiRotationTight, PointCubeIsZero) {
  EXPECT_DOUBLE_EQ(
      PsiRotationTight(Vec3(1, 2, 3), {Vec3(0.3, 0, 0), Vec3::Zero()}), 0.0);
}

TEST(PsiRotationTight, WithinOneMarginOfDenseSurfaceScan) {
  const Cuboid cube{Vec3(0.5, 0, 0), Vec3::Constant(0.2)};
  const Vec3 v = Vec3::UnitX();
  const Vec3 ref = Rodrigues(cube.center) * v;
  double dense = 0.0;
  constexpr int kSide = 200;
  for (int face = 0; face < 6; ++face) {
    const int axis = face / 2;
    for (int i = 0; i <= kSide; ++i) {
      for (int j = 0; j <= kSide; ++j) {
        Vec3 r = cube.center;
        r[axis] += (face % 2) ? 0.2 : -0.2;
        r[(axis + 1) % 3] += -0.2 + 0.4 * i / kSide;
        r[(axis + 2) % 3] += -0.2 + 0.4 * j / kSide;
        dense = std::max(dense, AngularDistance(Rodrigues(r) * v, ref));
      }
    }
  }
  EXPECT_NEAR(dense, 0.2817747, 1e-6);
  const double tight = PsiRotationTight(v, cube);
  EXPECT_GE(tight, dense);
  // Pitch 0.025 at the default divisor; the margin is half a cell diagonal.
  EXPECT_LE(tight, dense + 0.5 * std::hypot(0.025, 0.025) + 1e-12);
  EXPECT_LT(tight, PsiRotationWeak(cube));
  EXPECT_LE(SampleMaxRotationAngle(v, cube, 200000, 9), tight);
}

TEST(PsiRotationTight, ZeroVectorThrows) {
  EXPECT_THROW(PsiRotationTight(Vec3::Zero(), {Vec3::Zero(), Vec3::Constant(0.1)}),
               std::domain_error);
}

TEST(PsiRotationTight, BracketedBySamplesAndWeakBound) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> width(0.001, 0.6);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 150; ++k) {
    const Cuboid cube{Vec3(u(rng), u(rng), u(rng)) * 0.8,
                      Vec3::Constant(width(rng))};
    const Vec3 v = RandomUnit(rng);
    const double tight = PsiRotationTight(v, cube);
    EXPECT_LE(tight, PsiRotationWeak(cube) + 1e-9);
    EXPECT_LE(SampleMaxRotationAngle(v, cube, 400, k), tight + 1e-12);
    const double tight_inv = PsiRotationTightBearing(v, cube);
    EXPECT_LE(tight_inv, PsiRotationWeak(cube) + 1e-9);
    for (int s = 0; s < 50; ++s) {
      const Vec3 r = RandomIn(cube, rng);
      EXPECT_LE(AngularDistance(Rodrigues(r).transpose() * v,
                                Rodrigues(cube.center).transpose() * v),
                tight_inv + 1e-12);
    }
  }
}

TEST(PsiTranslation, VertexMaximumMatchesIndependentEvaluation) {
  const Vec3 p(0, 0, 10);
  const Cuboid ct{Vec3::Zero(), Vec3::Constant(1)};
  double expected = 0.0;
  for (int k = 0; k < 8; ++k) {
    const Vec3 t((k & 1) ? 1 : -1, (k & 2) ? 1 : -1, (k & 4) ? 1 : -1);
    const Vec3 a = p - t;
    expected = std::max(expected, std::acos(a.dot(p) / (a.norm() * p.norm())));
  }
  // atan(sqrt(2) / 9), reached at the near corners.
  EXPECT_NEAR(expected, 0.1558604, 1e-7);
  EXPECT_NEAR(PsiTranslation(p, ct), expected, 1e-12);
}

TEST(PsiTranslation, ObtuseMaximumLeavesTheVertices) {
  // Seen from p just outside a wide flat box, the far rim lies behind p.
  const Cuboid ct{Vec3::Zero(), Vec3(4, 4, 0.1)};
  const Vec3 p(3.9, 0, 0.2);
  double dense = 0.0;
  const Vec3 axis = p - ct.center;
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 400; ++j) {
      for (const double z : {-0.1, 0.1}) {
        const Vec3 t(-4 + 0.02 * i, -4 + 0.02 * j, z);
        dense = std::max(dense, AngularDistance(p - t, axis));
      }
    }
  }
  double vertex = 0.0;
  for (const Vec3& t : Vertices(ct)) vertex = std::max(vertex, AngularDistance(p - t, axis));
  EXPECT_GT(dense, vertex + 1e-3);
  EXPECT_LE(dense, PsiTranslation(p, ct) + 1e-12);
  EXPECT_NEAR(PsiTranslation(p, ct), dense, 1e-3);
}

TEST(PsiTranslation, InsideAndPointCuboid) {
  EXPECT_DOUBLE_EQ(PsiTranslation(Vec3(0.2, 0, 0), {Vec3::Zero(), Vec3::Constant(1)}),
                   kPi);
  EXPECT_DOUBLE_EQ(PsiTranslation(Vec3(0, 0, 5), {Vec3(1, 1, 1), Vec3::Zero()}),
                   0.0);
}

TEST(PsiTranslationWeak, Examples) {
  EXPECT_NEAR(PsiTranslationWeak(Vec3(0, 0, 10), {Vec3::Zero(), Vec3::Constant(1)}),
              std::asin(std::sqrt(3.0) / 10.0), 1e-15);
  EXPECT_NEAR(std::asin(std::sqrt(3.0) / 10.0), 0.174083, 1e-6);
  EXPECT_DOUBLE_EQ(
      PsiTranslationWeak(Vec3(0, 0, 1.5), {Vec3::Zero(), Vec3::Constant(1)}), kPi);
  EXPECT_DOUBLE_EQ(PsiTranslationWeak(Vec3(0, 0, 3), {Vec3::Zero(), Vec3::Zero()}),
                   0.0);
}

TEST(PsiTranslation, NeverLooserThanWeakBound) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_real_distribution<double> w(0.0, 2.0);
  for (int k = 0; k < 5000; ++k) {
    const Cuboid ct{Vec3(u(rng), u(rng), u(rng)), Vec3(w(rng), w(rng), w(rng))};
    const Vec3 p(u(rng), u(rng), u(rng));
    const double tight = PsiTranslation(p, ct);
    EXPECT_LE(tight, PsiTranslationWeak(p, ct) + 1e-12);
    if (!ct.Contains(p)) {
      EXPECT_LE(SampleMaxTranslationAngle(p, ct, 200, k), tight + 1e-12);
    }
  }
}

TEST(MinAngleRayBox, AgreesWithDenseSampling) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const Cuboid box{Vec3(u(rng), u(rng), u(rng)), Vec3(w(rng), w(rng), w(rng))};
    const Vec3 f = RandomUnit(rng);
    const double exact = MinAngleRayBox(f, box);
    double sampled = kPi;
    for (int s = 0; s < 3000; ++s) {
      const Vec3 x = RandomIn(box, rng);
      if (x.squaredNorm() > 0.0) sampled = std::min(sampled, AngularDistance(f, x));
    }
    EXPECT_LE(exact, sampled + 1e-12);
    EXPECT_GE(exact, sampled - 0.1);
  }
}

TEST(UpperBound, PointCuboidsReduceToObjective) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const ProblemInstance inst = RandomInstance(rng, 8, 6, 0.05);
    const Pose pose{0.3 * RandomUnit(rng), Vec3(0.1, -0.1, 0.05)};
    const Cuboid cr{pose.r, Vec3::Zero()};
    const Cuboid ct{pose.t, Vec3::Zero()};
    for (BoundMode m :
         {BoundMode::kWeakSphere, BoundMode::kTightCuboid, BoundMode::kGamma}) {
      EXPECT_EQ(UpperBound(cr, ct, inst, m), Objective(pose, inst));
    }
  }
}

TEST(UpperBound, GammaIgnoresPerpendicularPair) {
  const ProblemInstance inst =
      Single(Vec3::UnitX(), Vec3(0, 0, 5), kPi / 180.0);
  const Cuboid cr{Vec3::Zero(), Vec3::Zero()};
  const Cuboid ct{Vec3::Zero(), Vec3::Zero()};
  EXPECT_EQ(UpperBound(cr, ct, inst, BoundMode::kGamma), 0);
}

TEST(UpperBound, ValidAndOrderedOnRandomDomains) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> rw(0.0, 0.3);
  std::uniform_real_distribution<double> tw(0.0, 0.5);
  for (int k = 0; k < 200; ++k) {
    const ProblemInstance inst = RandomInstance(rng, 8, 6, 0.05);
    const Cuboid cr{0.3 * RandomUnit(rng), Vec3::Constant(rw(rng))};
    const Cuboid ct{Vec3(0.1, 0.0, -0.1), Vec3::Constant(tw(rng))};
    const int weak = UpperBound(cr, ct, inst, BoundMode::kWeakSphere);
    const int tight = UpperBound(cr, ct, inst, BoundMode::kTightCuboid);
    const int gamma = UpperBound(cr, ct, inst, BoundMode::kGamma);
    EXPECT_LE(gamma, tight);
    EXPECT_LE(tight, weak);
    for (int s = 0; s < 20; ++s) {
      const Pose pose{RandomIn(cr, rng), RandomIn(ct, rng)};
      EXPECT_LE(Objective(pose, inst), gamma);
    }
    EXPECT_EQ(LowerBound({cr.center, ct.center}, inst),
              Objective({cr.center, ct.center}, inst));
  }
}

TEST(RotationCubeBounds, PointRotationCubeHasEqualBounds) {
  std::mt19937_64 rng(23);
  const ProblemInstance inst = RandomInstance(rng, 10, 8, 0.05);
  const Cuboid cr{Vec3(0.1, 0.2, -0.1), Vec3::Zero()};
  const Cuboid ct{Vec3(0.1, 0, 0), Vec3::Constant(0.3)};
  for (BoundMode m :
       {BoundMode::kWeakSphere, BoundMode::kTightCuboid, BoundMode::kGamma}) {
    const NestedBounds b = RotationCubeBounds(cr, ct, inst, m, false);
    EXPECT_EQ(b.lower, b.upper);
    EXPECT_EQ(b.lower, Objective({cr.center, ct.center}, inst));
  }
}

TEST(RotationCubeBounds, GroundTruthAtPointTranslation) {
  SynthConfig cfg;
  cfg.num_points = 10;
  cfg.sigma_px = 0.0;
  cfg.seed = 2;
  const auto [inst, gt] = Generate(cfg);
  const NestedBounds b =
      RotationCubeBounds({gt.pose.r, Vec3::Zero()}, {gt.pose.t, Vec3::Zero()},
                         inst, BoundMode::kGamma, false);
  EXPECT_EQ(b.lower, inst.num_bearings());
}

TEST(RotationCubeBounds, RelaxedBoundCoversTranslationGrid) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    const ProblemInstance inst = RandomInstance(rng, 8, 6, 0.05);
    const Vec3 r = 0.3 * RandomUnit(rng);
    const Cuboid ct{Vec3(0.05, -0.05, 0.0), Vec3::Constant(0.2)};
    int best = 0;
    for (int i = -4; i <= 4; ++i) {
      for (int j = -4; j <= 4; ++j) {
        for (int l = -4; l <= 4; ++l) {
          best = std::max(best, Objective({r, ct.center + 0.05 * Vec3(i, j, l)}, inst));
        }
      }
    }
    for (BoundMode m :
         {BoundMode::kWeakSphere, BoundMode::kTightCuboid, BoundMode::kGamma}) {
      const NestedBounds b =
          RotationCubeBounds({r, Vec3::Zero()}, ct, inst, m, true);
      EXPECT_GE(b.lower, best) << BoundModeName(m);
      EXPECT_GE(b.upper, b.lower);
    }
  }
}

}  // namespace
}  // namespace gopac
