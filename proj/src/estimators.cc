#include "gopac/estimators.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

namespace gopac {
namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

Pose PoseFromVector(const Vec6& x) { return {x.head<3>(), x.tail<3>()}; }

Vec6 VectorFromPose(const Pose& pose) {
  Vec6 x;
  x << pose.r, pose.t;
  return x;
}

// Rotation vector taking f onto the direction of x; its norm is the angle.
// Smooth through the aligned configuration.
Vec3 LogResidual(const Vec3& f, const Vec3& x) {
  const Vec3 c = f.cross(x);
  const double s = c.norm();
  const double d = f.dot(x);
  if (s < 1e-12 * x.norm()) return c / d;
  return (std::atan2(s, d) / s) * c;
}

void Residuals(std::span<const Correspondence> corrs,
               const ProblemInstance& inst, const Vec6& x,
               Eigen::VectorXd* out) {
  const Mat3 rotation = Rodrigues(x.head<3>());
  const Vec3 t = x.tail<3>();
  out->resize(3 * static_cast<Eigen::Index>(corrs.size()));
  for (std::size_t k = 0; k < corrs.size(); ++k) {
    const Vec3 dir = rotation * (inst.points[corrs[k].point_index] - t);
    out->segment<3>(3 * k) = LogResidual(inst.bearings[corrs[k].bearing_index], dir);
  }
}

double CostAt(std::span<const Correspondence> corrs,
              const ProblemInstance& inst, const Vec6& x) {
  const double cost = AngularResidualSum(corrs, inst, PoseFromVector(x));
  return std::isfinite(cost) ? cost : std::numeric_limits<double>::infinity();
}

}  // namespace

double AngularResidualSum(std::span<const Correspondence> corrs,
                          const ProblemInstance& inst, const Pose& pose) {
  const Mat3 rotation = Rodrigues(pose.r);
  double sum = 0.0;
  for (const Correspondence& c : corrs) {
    const Vec3 x = rotation * (inst.points[c.point_index] - pose.t);
    sum += AngularDistance(inst.bearings[c.bearing_index], x);
  }
  return sum;
}

RefineResult RefinePnP(std::span<const Correspondence> corrs,
                       const ProblemInstance& inst, const Pose& init,
                       const RefineOptions& options) {
  if (corrs.size() < 3) {
    throw std::invalid_argument("RefinePnP needs at least 3 correspondences");
  }
  RefineResult result;
  result.pose = init;
  Vec6 x = VectorFromPose(init);
  double cost = 0.0;
  try {
    cost = CostAt(corrs, inst, x);
  } catch (const std::domain_error&) {
    result.diverged = true;
    result.initial_cost = result.final_cost =
        std::numeric_limits<double>::infinity();
    return result;
  }
  result.initial_cost = cost;

  const Eigen::Index rows = 3 * static_cast<Eigen::Index>(corrs.size());
  Eigen::VectorXd res(rows), plus(rows), minus(rows);
  Eigen::MatrixXd jac(rows, 6);
  double lambda = 1e-3;
  constexpr double kStep = 1e-7;
  constexpr double kWeightFloor = 1e-12;

  for (int iter = 0; iter < options.max_iterations && cost > 0.0; ++iter) {
    result.iterations = iter + 1;
    Residuals(corrs, inst, x, &res);
    for (int c = 0; c < 6; ++c) {
      Vec6 xp = x, xm = x;
      xp[c] += kStep;
      xm[c] -= kStep;
      Residuals(corrs, inst, xp, &plus);
      Residuals(corrs, inst, xm, &minus);
      jac.col(c) = (plus - minus) / (2.0 * kStep);
    }
    // Weights 1/sqrt(angle) per bearing turn the squared norm into the sum of
    // angles at the current iterate.
    for (std::size_t k = 0; k < corrs.size(); ++k) {
      const double angle = res.segment<3>(3 * k).norm();
      const double w = 1.0 / std::sqrt(std::max(angle, kWeightFloor));
      res.segment<3>(3 * k) *= w;
      jac.middleRows<3>(3 * k) *= w;
    }
    const Mat6 a = jac.transpose() * jac;
    const Vec6 b = jac.transpose() * res;

    bool accepted = false;
    double new_cost = cost;
    while (lambda < 1e12) {
      Mat6 damped = a;
      damped.diagonal() += lambda * (a.diagonal().array() + 1e-12).matrix();
      const Vec6 dx = -damped.ldlt().solve(b);
      const Vec6 candidate = x + dx;
      double c = std::numeric_limits<double>::infinity();
      if (candidate.allFinite()) {
        try {
          c = CostAt(corrs, inst, candidate);
        } catch (const std::domain_error&) {
        }
      }
      if (c < cost) {
        x = candidate;
        new_cost = c;
        lambda = std::max(lambda * 0.1, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) break;
    const double change = cost - new_cost;
    cost = new_cost;
    if (change < options.cost_tolerance) break;
  }

  if (!x.allFinite()) {
    result.diverged = true;
    result.final_cost = result.initial_cost;
    return result;
  }
  result.pose = {CanonicalRotationVec(x.head<3>()), x.tail<3>()};
  result.final_cost = cost;
  return result;
}

std::vector<Correspondence> ExtractCorrespondences(
    const Pose& pose, const ProblemInstance& inst) {
  const Mat3 rotation = Rodrigues(pose.r);
  std::vector<Correspondence> out;
  for (int i = 0; i < inst.num_bearings(); ++i) {
    int best_j = -1;
    double best_angle = std::numeric_limits<double>::infinity();
    for (int j = 0; j < inst.num_points(); ++j) {
      const Vec3 x = rotation * (inst.points[j] - pose.t);
      if (x.squaredNorm() == 0.0) continue;
      const double angle = AngularDistance(inst.bearings[i], x);
      if (angle <= inst.theta && angle < best_angle) {
        best_angle = angle;
        best_j = j;
      }
    }
    if (best_j >= 0) out.push_back({i, best_j});
  }
  return out;
}

Mat3 AlignDirections(std::span<const Vec3> from, std::span<const Vec3> to) {
  Mat3 b = Mat3::Zero();
  for (std::size_t k = 0; k < from.size(); ++k) {
    b += to[k] * from[k].transpose();
  }
  const Eigen::JacobiSVD<Mat3> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0
                ? -1.0
                : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

Solution RansacBaseline(const ProblemInstance& inst, std::int64_t iterations,
                        std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  Solution best;
  if (iterations <= 0) return best;
  const int n = inst.num_bearings();
  const int m = inst.num_points();
  if (n < 3 || m < 3) {
    throw std::invalid_argument("RANSAC needs at least 3 bearings and points");
  }
  const auto& cuboids = inst.translation_domain.cuboids;
  if (cuboids.empty()) throw std::invalid_argument("empty translation domain");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_cuboid(0, cuboids.size() - 1);
  auto draw3 = [&rng](int count, std::array<int, 3>& out) {
    for (int k = 0; k < 3; ++k) {
      for (;;) {
        const int v = std::uniform_int_distribution<int>(0, count - 1)(rng);
        bool fresh = true;
        for (int q = 0; q < k; ++q) fresh = fresh && out[q] != v;
        if (fresh) {
          out[k] = v;
          break;
        }
      }
    }
  };

  best.nu_star = -1;
  std::array<int, 3> bi{}, pj{};
  for (std::int64_t it = 0; it < iterations; ++it) {
    draw3(n, bi);
    draw3(m, pj);
    const Cuboid& c = cuboids[pick_cuboid(rng)];
    Vec3 t;
    for (int a = 0; a < 3; ++a) t[a] = c.center[a] + unit(rng) * c.half_widths[a];

    std::array<Correspondence, 3> corrs;
    std::array<Vec3, 3> world, cam;
    bool degenerate = false;
    for (int k = 0; k < 3; ++k) {
      corrs[k] = {bi[k], pj[k]};
      const Vec3 d = inst.points[pj[k]] - t;
      if (d.squaredNorm() == 0.0) degenerate = true;
      world[k] = d.normalized();
      cam[k] = inst.bearings[bi[k]];
    }
    if (degenerate) continue;
    const Pose init{AngleAxisFromMatrix(AlignDirections(world, cam)), t};
    const RefineResult refined = RefinePnP(corrs, inst, init);
    if (!refined.pose.t.allFinite()) continue;
    const int score = Objective(refined.pose, inst);
    if (score > best.nu_star) {
      best.nu_star = score;
      best.pose = refined.pose;
      if (score == n) break;
    }
  }
  if (best.nu_star < 0) {
    best.nu_star = 0;
    best.pose = Pose{};
    best.nu_star = Objective(best.pose, inst);
  }
  best.correspondences = ExtractCorrespondences(best.pose, inst);
  best.optimal = false;
  best.wall_time = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return best;
}

}  // namespace gopac
