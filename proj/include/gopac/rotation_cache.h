#ifndef GOPAC_ROTATION_CACHE_H_
#define GOPAC_ROTATION_CACHE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gopac/geometry.h"
#include "gopac/kernels.h"

namespace gopac {

// Address of a node of the rotation octree over [-pi, pi]^3. Level L has 2^L
// cells per axis of half-width pi / 2^L.
struct RotationNode {
  int level = 0;
  int ix = 0;
  int iy = 0;
  int iz = 0;

  Cuboid Cube() const;
  RotationNode Child(int k) const;
};

// Rotated bearings R_c^T f for every octree node down to a fixed depth, plus a
// memo of the tight rotation angle per bearing. The memo fills as the search
// asks for entries; a value is the same whether it comes from here or is
// computed directly.
class RotationCache {
 public:
  // Nodes wholly outside the pi-ball are skipped. `parallel` builds the
  // levels with OpenMP; the serial build is the reference.
  RotationCache(std::span<const Vec3> bearings, int depth,
                bool parallel = true);

  int depth() const { return depth_; }
  int num_bearings() const { return num_bearings_; }
  std::size_t num_stored() const { return num_stored_; }

  // Nodes in a full octree of the given depth: sum over k <= depth of 8^k.
  static std::size_t NodeCount(int depth);

  // Terms for a node, or false when the node is deeper than the cache or was
  // culled. `lazy` must outlive any kernel call using `out`.
  bool Lookup(const RotationNode& node, bool tight,
              const LazySurfaceSampler* lazy, RotationTerms* out) const;

  // Rotated bearings of a stored node; empty if absent.
  std::span<const Vec3> Rotated(const RotationNode& node) const;

 private:
  std::size_t Index(const RotationNode& node) const;

  std::span<const Vec3> bearings_;
  int depth_ = 0;
  int num_bearings_ = 0;
  std::size_t num_stored_ = 0;
  std::vector<std::uint8_t> present_;
  std::vector<Vec3> rotated_;   // NodeCount(depth) x N
  std::vector<PsiMemo> memos_;  // one per node
  std::vector<double> psi_weak_;
};

}  // namespace gopac

#endif  // GOPAC_ROTATION_CACHE_H_
