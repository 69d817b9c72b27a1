#ifndef GOPAC_SRC_KERNEL_DETAIL_H_
#define GOPAC_SRC_KERNEL_DETAIL_H_

#include <cmath>

#include "gopac/kernels.h"

namespace gopac::detail {

// Thresholds shared by every bearing of one cube evaluation.
struct KernelConstants {
  double theta;
  double cos_theta;
  double sin_theta;
  double weak_hi;  // theta + psi_weak + slack
  double cos_weak_hi;
  double sin_weak_hi;

  KernelConstants(double theta_in, double psi_weak)
      : theta(theta_in),
        cos_theta(std::cos(theta_in)),
        sin_theta(std::sin(theta_in)),
        weak_hi(theta_in + psi_weak + kBoundSlack),
        cos_weak_hi(std::cos(weak_hi)),
        sin_weak_hi(std::sin(weak_hi)) {}
};

// angle(u, v) <= a + b for unit u, v with d = u.v, using cos(a + b).
inline bool WithinSum(double d, double a, double ca, double sa, double b,
                      double cb, double sb) {
  if (a + b >= kPi) return true;
  return d >= ca * cb - sa * sb;
}

struct BearingHit {
  bool lower = false;
  bool upper = false;
};

// With `gate_only` the box tests are skipped and the result is the cone
// relaxation of the upper test alone.
inline BearingHit EvaluateBearing(int i, const RotationTerms& rot,
                                  const TranslationTerms& trans,
                                  const KernelConstants& k,
                                  bool gate_only = false) {
  const Vec3& g = rot.rotated[i];
  double hi = k.weak_hi;
  double cos_hi = k.cos_weak_hi;
  double sin_hi = k.sin_weak_hi;
  bool resolved = rot.memo == nullptr;
  bool upper = false;

  const int m = static_cast<int>(trans.directions.size());
  for (int j = 0; j < m; ++j) {
    const PointState state = trans.state[j];
    if (state == PointState::kCoincident) continue;
    const double d = g.dot(trans.directions[j]);
    const double b = trans.psi[j];
    const double cb = trans.cos_psi[j];
    const double sb = trans.sin_psi[j];
    if (!WithinSum(d, hi, cos_hi, sin_hi, b, cb, sb)) continue;
    if (!resolved) {
      // Passed with the weak rotation angle; tighten it once per bearing.
      double psi = rot.memo->Get(i);
      if (psi < 0.0) {
        psi = rot.lazy->Get().BoundInverse(rot.original[i], g);
        rot.memo->Set(i, psi);
      }
      hi = k.theta + psi + kBoundSlack;
      cos_hi = std::cos(hi);
      sin_hi = std::sin(hi);
      resolved = true;
      if (!WithinSum(d, hi, cos_hi, sin_hi, b, cb, sb)) continue;
    }
    if (gate_only) return {false, true};
    if (trans.kind == TranslationKind::kCone ||
        state == PointState::kContained) {
      if (WithinSum(d, k.theta, k.cos_theta, k.sin_theta, b, cb, sb)) {
        return {true, true};
      }
      upper = true;
      continue;
    }
    if (d >= k.cos_theta) return {true, true};
    // The centre ray lies in the box, so it already settles the upper test.
    if (hi >= kPi || d >= cos_hi) upper = true;
    const bool may_lower =
        WithinSum(d, k.theta, k.cos_theta, k.sin_theta, b, cb, sb);
    if (upper && !may_lower) continue;
    if (k.cos_theta > 0.0 && cos_hi > 0.0) {
      const ConeHits hits = ConesMeetBox(g, trans.offsets[j],
                                         trans.half_widths, k.cos_theta, cos_hi);
      if (hits.inner) return {true, true};
      upper = upper || hits.outer;
      continue;
    }
    const double mc = MaxCosRayBox(g, trans.offsets[j], trans.half_widths);
    if (mc >= k.cos_theta) return {true, true};
    if (mc >= cos_hi) upper = true;
  }
  return {false, upper};
}

}  // namespace gopac::detail

#endif  // GOPAC_SRC_KERNEL_DETAIL_H_
