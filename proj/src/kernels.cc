#include "gopac/kernels.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kernel_detail.h"

namespace gopac {

RotationSurfaceSampler::RotationSurfaceSampler(const Cuboid& cube,
                                               int pitch_divisor) {
  if (pitch_divisor < 1) {
    throw std::invalid_argument("pitch divisor must be at least 1");
  }
  weak_ = PsiRotationWeak(cube);
  if (!(cube.MaxHalfWidth() > 0.0)) {
    rotations_.push_back(Rodrigues(cube.center));
    return;
  }
  const Vec3 pitch = cube.half_widths / pitch_divisor;
  const Vec3 corner = cube.Min();
  const int n = 2 * pitch_divisor;
  auto on_face = [n](int v) { return v == 0 || v == n; };
  rotations_.reserve(6 * n * n + 2);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      for (int k = 0; k <= n; ++k) {
        if (!on_face(i) && !on_face(j) && !on_face(k)) continue;
        const Vec3 r = corner + Vec3(i, j, k).cwiseProduct(pitch);
        rotations_.push_back(Rodrigues(r));
      }
    }
  }
  // Any face point is within half a cell diagonal of a node; the two largest
  // pitches bound every face's cell.
  Vec3 sorted = pitch;
  std::sort(sorted.data(), sorted.data() + 3);
  margin_ = 0.5 * std::hypot(sorted[1], sorted[2]);
}

double RotationSurfaceSampler::Finish(double max_chord_sq) const {
  const double chord = std::sqrt(max_chord_sq);
  const double angle = 2.0 * std::asin(std::min(1.0, 0.5 * chord));
  return std::min(angle + margin_, weak_);
}

double RotationSurfaceSampler::BoundForward(const Vec3& v,
                                            const Vec3& center_image) const {
  double best = 0.0;
  for (const Mat3& r : rotations_) {
    best = std::max(best, (r * v - center_image).squaredNorm());
  }
  return Finish(best);
}

double RotationSurfaceSampler::SampledMaxInverse(
    const Vec3& f, const Vec3& center_image) const {
  double best = 0.0;
  for (const Mat3& r : rotations_) {
    best = std::max(best, (r.transpose() * f - center_image).squaredNorm());
  }
  return 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(best)));
}

double RotationSurfaceSampler::BoundInverse(const Vec3& f,
                                            const Vec3& center_image) const {
  return std::min(SampledMaxInverse(f, center_image) + margin_, weak_);
}

const RotationSurfaceSampler& LazySurfaceSampler::Get() const {
  std::call_once(once_, [this] { sampler_.emplace(cube_, pitch_divisor_); });
  return *sampler_;
}

void PsiMemo::Reset(int n) {
  values_ = std::make_unique<std::atomic<double>[]>(n);
  for (int i = 0; i < n; ++i) values_[i].store(-1.0, std::memory_order_relaxed);
  size_ = n;
}

TranslationTerms TranslationTerms::Build(std::span<const Vec3> points,
                                         const Cuboid& ct, BoundMode mode,
                                         bool with_psi_t) {
  TranslationTerms terms;
  terms.kind = (with_psi_t && mode == BoundMode::kGamma)
                   ? TranslationKind::kBox
                   : TranslationKind::kCone;
  terms.half_widths = with_psi_t ? ct.half_widths : Vec3::Zero();
  const std::size_t m = points.size();
  terms.offsets.resize(m);
  terms.directions.resize(m);
  terms.psi.resize(m);
  terms.cos_psi.resize(m);
  terms.sin_psi.resize(m);
  terms.state.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const Vec3& p = points[j];
    const Vec3 offset = p - ct.center;
    const double dist = offset.norm();
    double psi = 0.0;
    if (with_psi_t) {
      psi = PsiTranslationWeak(p, ct);
      // Both angles are valid; the minimum keeps the tight modes no looser
      // than the weak one even where they coincide up to rounding.
      if (mode != BoundMode::kWeakSphere) {
        psi = std::min(psi, PsiTranslation(p, ct));
      }
    }
    PointState state = PointState::kNormal;
    if (dist == 0.0) {
      state = psi >= kPi ? PointState::kContained : PointState::kCoincident;
    } else if (with_psi_t && ct.Contains(p)) {
      state = PointState::kContained;
    }
    terms.offsets[j] = offset;
    terms.directions[j] = dist > 0.0 ? Vec3(offset / dist) : Vec3::UnitZ();
    terms.psi[j] = psi;
    terms.cos_psi[j] = std::cos(psi);
    terms.sin_psi[j] = std::sin(psi);
    terms.state[j] = state;
  }
  return terms;
}

std::vector<Vec3> RotateBearings(const Vec3& center,
                                 std::span<const Vec3> bearings) {
  const Mat3 rt = Rodrigues(center).transpose();
  std::vector<Vec3> out;
  out.reserve(bearings.size());
  for (const Vec3& f : bearings) out.push_back(rt * f);
  return out;
}

void RotationTermsBuffer::Reset(const Cuboid& cube,
                                std::span<const Vec3> bearings, BoundMode mode,
                                int pitch_divisor) {
  original_ = bearings;
  rotated_ = RotateBearings(cube.center, bearings);
  psi_weak_ = PsiRotationWeak(cube);
  tight_ = mode != BoundMode::kWeakSphere;
  lazy_.reset();
  if (tight_) {
    memo_.Reset(static_cast<int>(bearings.size()));
    lazy_.emplace(cube, pitch_divisor);
  }
}

RotationTerms RotationTermsBuffer::view() const {
  RotationTerms terms;
  terms.original = original_;
  terms.rotated = rotated_;
  terms.psi_weak = psi_weak_;
  if (tight_) {
    terms.memo = &memo_;
    terms.lazy = &*lazy_;
  }
  return terms;
}

double MaxCosRayBox(const Vec3& g, const Vec3& offset,
                    const Vec3& half_widths) {
  // Slab test for the ray {s g : s >= 0}.
  double s_min = 0.0;
  double s_max = std::numeric_limits<double>::infinity();
  bool hit = true;
  for (int a = 0; a < 3 && hit; ++a) {
    const double lo = offset[a] - half_widths[a];
    const double hi = offset[a] + half_widths[a];
    if (g[a] == 0.0) {
      hit = lo <= 0.0 && hi >= 0.0;
      continue;
    }
    double s0 = lo / g[a];
    double s1 = hi / g[a];
    if (s0 > s1) std::swap(s0, s1);
    s_min = std::max(s_min, s0);
    s_max = std::min(s_max, s1);
    hit = s_min <= s_max;
  }
  if (hit) return 1.0;

  std::array<Vec3, 8> v;
  std::array<double, 8> vn;
  double best = -1.0;
  for (int k = 0; k < 8; ++k) {
    for (int a = 0; a < 3; ++a) {
      v[k][a] = offset[a] + (((k >> a) & 1) ? half_widths[a] : -half_widths[a]);
    }
    vn[k] = v[k].norm();
    best = std::max(best, g.dot(v[k]) / vn[k]);
  }
  for (int a = 0; a < 3; ++a) {
    if (half_widths[a] == 0.0) continue;
    const double len = 2.0 * half_widths[a];
    const double dd = len * len;
    const double fd = len * g[a];
    for (int k = 0; k < 8; ++k) {
      if ((k >> a) & 1) continue;
      const Vec3& p = v[k];
      const double fa = g.dot(p);
      const double ad = len * p[a];
      const double denom = fd * ad - fa * dd;
      if (denom == 0.0) continue;
      const double s = (fa * ad - fd * vn[k] * vn[k]) / denom;
      if (!(s > 0.0 && s < 1.0)) continue;
      Vec3 x = p;
      x[a] += s * len;
      best = std::max(best, g.dot(x) / x.norm());
    }
  }
  return best;
}

namespace {

bool RayHitsBox(const Vec3& g, const Vec3& offset, const Vec3& half_widths) {
  double s_min = 0.0;
  double s_max = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double lo = offset[a] - half_widths[a];
    const double hi = offset[a] + half_widths[a];
    if (g[a] == 0.0) {
      if (lo > 0.0 || hi < 0.0) return false;
      continue;
    }
    double s0 = lo / g[a];
    double s1 = hi / g[a];
    if (s0 > s1) std::swap(s0, s1);
    s_min = std::max(s_min, s0);
    s_max = std::min(s_max, s1);
    if (s_min > s_max) return false;
  }
  return true;
}

}  // namespace

ConeHits ConesMeetBox(const Vec3& g, const Vec3& offset, const Vec3& half_widths,
                      double cos_inner, double cos_outer) {
  if (RayHitsBox(g, offset, half_widths)) return {true, true};
  const double ci2 = cos_inner * cos_inner;
  const double co2 = cos_outer * cos_outer;
  ConeHits hits;
  // A point x with g.x > 0 lies in the cone of cosine c iff (g.x)^2 >= c^2 |x|^2.
  auto test = [&](double gx, double nn) {
    if (gx <= 0.0) return false;
    const double gx2 = gx * gx;
    if (gx2 >= ci2 * nn) {
      hits = {true, true};
      return true;
    }
    if (gx2 >= co2 * nn) hits.outer = true;
    return false;
  };

  std::array<Vec3, 8> v;
  std::array<double, 8> gv;
  std::array<double, 8> nn;
  for (int k = 0; k < 8; ++k) {
    for (int a = 0; a < 3; ++a) {
      v[k][a] = offset[a] + (((k >> a) & 1) ? half_widths[a] : -half_widths[a]);
    }
    gv[k] = g.dot(v[k]);
    nn[k] = v[k].squaredNorm();
    if (test(gv[k], nn[k])) return hits;
  }
  // Along an edge p + s e the cone margin (g.x)^2 - c^2 |x|^2 is quadratic in
  // s; an interior maximum exists only when the edge direction lies outside
  // the cone.
  for (int a = 0; a < 3; ++a) {
    if (half_widths[a] == 0.0) continue;
    const double len = 2.0 * half_widths[a];
    const double ge = len * g[a];
    for (int k = 0; k < 8; ++k) {
      if ((k >> a) & 1) continue;
      const double pe = len * v[k][a];
      for (const double c2 : {ci2, co2}) {
        if (c2 == co2 && hits.outer) break;
        const double qa = ge * ge - c2 * len * len;
        if (qa >= 0.0) continue;
        const double qb = 2.0 * (gv[k] * ge - c2 * pe);
        const double s = -qb / (2.0 * qa);
        if (!(s > 0.0 && s < 1.0)) continue;
        const double gx = gv[k] + s * ge;
        const double xx = nn[k] + 2.0 * s * pe + s * s * len * len;
        if (test(gx, xx)) return hits;
      }
    }
  }
  return hits;
}

NestedBounds CountCubeSerial(const RotationTerms& rot,
                             const TranslationTerms& trans, double theta,
                             int prune_at) {
  const detail::KernelConstants k(theta, rot.psi_weak);
  NestedBounds out;
  const int n = static_cast<int>(rot.rotated.size());
  if (trans.kind == TranslationKind::kBox && prune_at >= 0) {
    std::vector<char> gated(n);
    int cone_upper = 0;
    for (int i = 0; i < n; ++i) {
      gated[i] = detail::EvaluateBearing(i, rot, trans, k, true).upper;
      cone_upper += gated[i];
    }
    if (cone_upper <= prune_at) return {0, cone_upper};
    for (int i = 0; i < n; ++i) {
      if (!gated[i]) continue;
      const detail::BearingHit hit = detail::EvaluateBearing(i, rot, trans, k);
      out.lower += hit.lower;
      out.upper += hit.upper;
    }
    return out;
  }
  for (int i = 0; i < n; ++i) {
    const detail::BearingHit hit = detail::EvaluateBearing(i, rot, trans, k);
    out.lower += hit.lower;
    out.upper += hit.upper;
  }
  return out;
}

}  // namespace gopac
