#include "gopac/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace gopac {
namespace {

constexpr double kRotationTolerance = 0.1;
constexpr double kCentreTolerance = 0.1;

// Uniform on the torus surface: accept the tube angle with probability
// proportional to the local area element.
Vec3 SampleTorus(const TorusPrior& prior, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double big = prior.major_radius;
  const double small = prior.minor_radius;
  for (;;) {
    const double u = angle(rng);
    const double v = angle(rng);
    const double ring = big + small * std::cos(v);
    if (unit(rng) * (big + small) > ring) continue;
    return {ring * std::cos(u), ring * std::sin(u), small * std::sin(v)};
  }
}

// World-to-camera rotation whose optical axis points from c to the origin,
// rolled by `roll` about that axis.
Mat3 LookAtOrigin(const Vec3& c, double roll) {
  const Vec3 z = (-c).normalized();
  const Vec3 helper = std::abs(z.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  const Vec3 a = helper.cross(z).normalized();
  const Vec3 b = z.cross(a);
  const Vec3 x = std::cos(roll) * a + std::sin(roll) * b;
  const Vec3 y = z.cross(x);
  Mat3 r;
  r.row(0) = x.transpose();
  r.row(1) = y.transpose();
  r.row(2) = z.transpose();
  return r;
}

}  // namespace

Intrinsics SynthConfig::DefaultIntrinsics() {
  const double f = 320.0 / std::tan(kPi / 6.0);
  return {f, f, 320.0, 240.0};
}

void SynthConfig::Validate() const {
  if (scene == SceneKind::kUniform && num_points < 1) {
    throw std::invalid_argument("num_points must be >= 1");
  }
  if (!(omega_3d >= 0.0 && omega_3d < 1.0)) {
    throw std::invalid_argument("omega_3d must lie in [0, 1)");
  }
  if (!(omega_2d >= 0.0 && omega_2d < 1.0)) {
    throw std::invalid_argument("omega_2d must lie in [0, 1)");
  }
  if (!(sigma_px >= 0.0)) throw std::invalid_argument("sigma_px must be >= 0");
  if (!(intrinsics.fx > 0.0 && intrinsics.fy > 0.0)) {
    throw std::invalid_argument("focal lengths must be positive");
  }
  if (image_width < 1 || image_height < 1) {
    throw std::invalid_argument("image size must be positive");
  }
  if (!(prior.major_radius > prior.minor_radius && prior.minor_radius >= 0.0)) {
    throw std::invalid_argument("torus radii must satisfy R > r >= 0");
  }
  if (prior.cube_count < 1) throw std::invalid_argument("cube_count must be >= 1");
  if (!(theta > 0.0 && theta < kPi)) {
    throw std::invalid_argument("theta must lie in (0, pi)");
  }
  if (!(zeta > 0.0)) throw std::invalid_argument("zeta must be positive");
}

double TorusCoverHalfWidth(const TorusPrior& prior) {
  if (prior.cube_half_width) return *prior.cube_half_width;
  // A surface point is within the tube radius of its centreline point, which
  // is within half a station spacing (as a chord) of the nearest station.
  return prior.minor_radius +
         2.0 * prior.major_radius * std::sin(kPi / (2.0 * prior.cube_count));
}

TranslationDomain TorusDomain(const TorusPrior& prior, double zeta) {
  TranslationDomain domain;
  domain.zeta = zeta;
  const double h = TorusCoverHalfWidth(prior);
  for (int k = 0; k < prior.cube_count; ++k) {
    const double u = 2.0 * kPi * k / prior.cube_count;
    domain.cuboids.push_back(
        {Vec3(prior.major_radius * std::cos(u),
              prior.major_radius * std::sin(u), 0.0),
         Vec3::Constant(h)});
  }
  return domain;
}

std::pair<ProblemInstance, GroundTruth> Generate(const SynthConfig& cfg) {
  cfg.Validate();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> box(-1.0, 1.0);

  ProblemInstance inst;
  inst.theta = cfg.theta;
  if (cfg.scene == SceneKind::kLattice) {
    for (int i = -1; i <= 1; ++i) {
      for (int j = -1; j <= 1; ++j) {
        for (int k = -1; k <= 1; ++k) inst.points.emplace_back(i, j, k);
      }
    }
  } else {
    for (int j = 0; j < cfg.num_points; ++j) {
      const double x = box(rng);
      const double y = box(rng);
      const double z = box(rng);
      inst.points.emplace_back(x, y, z);
    }
  }
  const int m = inst.num_points();

  GroundTruth gt;
  gt.point_occluded.assign(m, false);
  const int occluded = static_cast<int>(std::ceil(cfg.omega_3d * m - 1e-9));
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int k = 0; k < occluded; ++k) gt.point_occluded[order[k]] = true;
  const int visible = m - occluded;
  if (visible < 1) {
    throw std::invalid_argument("no visible points: omega_3d too large");
  }

  const Vec3 centre = SampleTorus(cfg.prior, rng);
  const double roll = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
  const Mat3 rotation = LookAtOrigin(centre, roll);
  gt.pose = {AngleAxisFromMatrix(rotation), centre};

  std::normal_distribution<double> noise(0.0, cfg.sigma_px);
  const Intrinsics& k = cfg.intrinsics;
  std::vector<Vec3> bearings;
  std::vector<int> source;  // point index, or -1 for clutter
  for (int j = 0; j < m; ++j) {
    if (gt.point_occluded[j]) continue;
    const Vec3 x = rotation * (inst.points[j] - centre);
    if (!(x.z() > 0.0)) {
      throw std::invalid_argument("a visible point lies behind the camera");
    }
    Eigen::Vector2d px(k.fx * x.x() / x.z() + k.cx, k.fy * x.y() / x.z() + k.cy);
    if (cfg.sigma_px > 0.0) {
      const double du = noise(rng);
      const double dv = noise(rng);
      px += Eigen::Vector2d(du, dv);
    }
    bearings.push_back(BearingFromPixel(k, px));
    source.push_back(j);
  }
  const int clutter = static_cast<int>(
      std::lround(cfg.omega_2d * visible / (1.0 - cfg.omega_2d)));
  std::uniform_real_distribution<double> u(0.0, cfg.image_width);
  std::uniform_real_distribution<double> v(0.0, cfg.image_height);
  for (int c = 0; c < clutter; ++c) {
    const double pu = u(rng);
    const double pv = v(rng);
    bearings.push_back(BearingFromPixel(k, Eigen::Vector2d(pu, pv)));
    source.push_back(-1);
  }

  std::vector<int> perm(bearings.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  gt.bearing_outlier.assign(bearings.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    inst.bearings.push_back(bearings[perm[i]]);
    const int j = source[perm[i]];
    if (j < 0) {
      gt.bearing_outlier[i] = true;
    } else {
      gt.inlier_matching.push_back({static_cast<int>(i), j});
    }
  }

  inst.translation_domain =
      cfg.domain ? *cfg.domain : TorusDomain(cfg.prior, cfg.zeta);
  if (!cfg.domain) inst.translation_domain.zeta = cfg.zeta;
  return {std::move(inst), std::move(gt)};
}

PoseSuccessFlags PoseSuccess(const Pose& est, const Pose& gt) {
  PoseSuccessFlags flags;
  flags.rot_ok =
      RotationAngleBetween(Rodrigues(est.r), Rodrigues(gt.r)) < kRotationTolerance;
  const double err = (est.t - gt.t).norm();
  const double ref = gt.t.norm();
  if (ref > 0.0) {
    flags.trans_ok = err / ref < kCentreTolerance;
  } else {
    flags.absolute_fallback = true;
    flags.trans_ok = err < kCentreTolerance;
  }
  return flags;
}

}  // namespace gopac
