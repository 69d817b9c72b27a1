#ifndef GOPAC_KERNELS_H_
#define GOPAC_KERNELS_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "gopac/bounds.h"
#include "gopac/geometry.h"

// Inner loops of the bound evaluation. The counting kernel has a serial
// reference and an OpenMP version over bearings; both return identical counts.

namespace gopac {

// Slack added to every upper-bound threshold so that rounding in the cosine
// tests never rejects a pair the exact angle would accept.
inline constexpr double kBoundSlack = 1e-9;

// Surface grid of a rotation cube together with the certification margin.
class RotationSurfaceSampler {
 public:
  RotationSurfaceSampler(const Cuboid& cube, int pitch_divisor);

  // Certified max over the cube of angle(R_r v, R_c v); `center_image` is
  // R_c v normalised.
  double BoundForward(const Vec3& v, const Vec3& center_image) const;
  // Certified max over the cube of angle(R_r^T f, R_c^T f); `center_image`
  // is R_c^T f normalised.
  double BoundInverse(const Vec3& f, const Vec3& center_image) const;

  // Largest sampled angle, without margin or clamping.
  double SampledMaxInverse(const Vec3& f, const Vec3& center_image) const;

  std::size_t num_samples() const { return rotations_.size(); }
  double margin() const { return margin_; }

 private:
  double Finish(double max_chord_sq) const;

  std::vector<Mat3> rotations_;
  double margin_ = 0.0;
  double weak_ = 0.0;
};

// Builds the sampler on first use. Safe to call from several threads.
class LazySurfaceSampler {
 public:
  LazySurfaceSampler(const Cuboid& cube, int pitch_divisor)
      : cube_(cube), pitch_divisor_(pitch_divisor) {}

  const RotationSurfaceSampler& Get() const;

 private:
  Cuboid cube_;
  int pitch_divisor_;
  mutable std::once_flag once_;
  mutable std::optional<RotationSurfaceSampler> sampler_;
};

enum class TranslationKind : std::uint8_t {
  kCone,  // each point widened by a translation angle
  kBox,   // each point replaced by the box p - C_t
};

enum class PointState : std::uint8_t {
  kNormal,
  kContained,   // p lies in C_t: every bearing matches it
  kCoincident,  // p == t0 on a point domain: never matches
};

// Per-point terms for one translation cuboid.
struct TranslationTerms {
  TranslationKind kind = TranslationKind::kCone;
  Vec3 half_widths = Vec3::Zero();
  std::vector<Vec3> offsets;     // p - t0
  std::vector<Vec3> directions;  // (p - t0) / |p - t0|
  std::vector<double> psi;
  std::vector<double> cos_psi;
  std::vector<double> sin_psi;
  std::vector<PointState> state;

  // with_psi_t == false uses the point domain {ct.center}.
  static TranslationTerms Build(std::span<const Vec3> points,
                                const Cuboid& ct, BoundMode mode,
                                bool with_psi_t);
};

// Per-bearing tight rotation angles, filled on demand. Entries are atomics so
// that workers sharing a cache node may race to store the same value.
class PsiMemo {
 public:
  PsiMemo() = default;
  explicit PsiMemo(int n) { Reset(n); }
  PsiMemo(PsiMemo&&) = default;
  PsiMemo& operator=(PsiMemo&&) = default;

  void Reset(int n);
  int size() const { return size_; }
  // Negative when not yet computed.
  double Get(int i) const { return values_[i].load(std::memory_order_relaxed); }
  void Set(int i, double psi) const {
    values_[i].store(psi, std::memory_order_relaxed);
  }

 private:
  std::unique_ptr<std::atomic<double>[]> values_;
  int size_ = 0;
};

// Per-bearing terms for one rotation cube. With `memo` null every bearing uses
// psi_weak; otherwise tight angles come from the memo or, on a miss, from
// `lazy`.
struct RotationTerms {
  std::span<const Vec3> original;  // f
  std::span<const Vec3> rotated;   // R_c^T f
  double psi_weak = 0.0;
  const PsiMemo* memo = nullptr;
  const LazySurfaceSampler* lazy = nullptr;
};

// Rotated bearings of a cube centre, R_c^T f for every f.
std::vector<Vec3> RotateBearings(const Vec3& center,
                                 std::span<const Vec3> bearings);

// Owning storage for RotationTerms outside the cache.
class RotationTermsBuffer {
 public:
  void Reset(const Cuboid& cube, std::span<const Vec3> bearings,
             BoundMode mode, int pitch_divisor);
  RotationTerms view() const;

 private:
  std::span<const Vec3> original_;
  std::vector<Vec3> rotated_;
  double psi_weak_ = 0.0;
  bool tight_ = false;
  PsiMemo memo_;
  std::optional<LazySurfaceSampler> lazy_;
};

// Largest cos(angle(g, x)) over x in the box centred at `offset`; 1 when the
// ray through g meets the box.
double MaxCosRayBox(const Vec3& g, const Vec3& offset, const Vec3& half_widths);

struct ConeHits {
  bool inner = false;
  bool outer = false;
};

// Whether the box meets the cones about unit g with cosines cos_inner >=
// cos_outer > 0. Agrees with comparing MaxCosRayBox against each cosine, but
// works on squared quantities and needs no square roots.
ConeHits ConesMeetBox(const Vec3& g, const Vec3& offset, const Vec3& half_widths,
                      double cos_inner, double cos_outer);

// Lower and upper counts for a rotation cube against a translation domain.
//
// For box terms a non-negative `prune_at` enables a cheap first pass with the
// circumscribing cones; when its upper count is already at most `prune_at`
// the result is {0, that count} and no box test runs. Otherwise the counts
// are exact as without it.
NestedBounds CountCubeSerial(const RotationTerms& rot,
                             const TranslationTerms& trans, double theta,
                             int prune_at = -1);
NestedBounds CountCubeParallel(const RotationTerms& rot,
                               const TranslationTerms& trans, double theta,
                               int prune_at = -1);

}  // namespace gopac

#endif  // GOPAC_KERNELS_H_
