#include <vector>

#include "gopac/kernels.h"
#include "kernel_detail.h"

namespace gopac {

NestedBounds CountCubeParallel(const RotationTerms& rot,
                               const TranslationTerms& trans, double theta,
                               int prune_at) {
  const detail::KernelConstants k(theta, rot.psi_weak);
  const int n = static_cast<int>(rot.rotated.size());
  const bool two_pass = trans.kind == TranslationKind::kBox && prune_at >= 0;
  std::vector<char> gated;
  if (two_pass) {
    gated.assign(n, 0);
    int cone_upper = 0;
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : cone_upper)
    for (int i = 0; i < n; ++i) {
      gated[i] = detail::EvaluateBearing(i, rot, trans, k, true).upper;
      cone_upper += gated[i];
    }
    if (cone_upper <= prune_at) return {0, cone_upper};
  }
  int lower = 0;
  int upper = 0;
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : lower, upper)
  for (int i = 0; i < n; ++i) {
    if (two_pass && !gated[i]) continue;
    const detail::BearingHit hit = detail::EvaluateBearing(i, rot, trans, k);
    lower += hit.lower;
    upper += hit.upper;
  }
  return {lower, upper};
}

}  // namespace gopac
