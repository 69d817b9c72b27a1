#include "gopac/rotation_cache.h"

#include <stdexcept>

#include "gopac/bounds.h"
#include "gopac/domain.h"

namespace gopac {

Cuboid RotationNode::Cube() const {
  const double delta = kPi / static_cast<double>(1 << level);
  auto center = [delta](int i) { return -kPi + (2 * i + 1) * delta; };
  return {Vec3(center(ix), center(iy), center(iz)), Vec3::Constant(delta)};
}

RotationNode RotationNode::Child(int k) const {
  return {level + 1, 2 * ix + (k & 1), 2 * iy + ((k >> 1) & 1),
          2 * iz + ((k >> 2) & 1)};
}

std::size_t RotationCache::NodeCount(int depth) {
  std::size_t total = 0;
  std::size_t level = 1;
  for (int k = 0; k <= depth; ++k) {
    total += level;
    level *= 8;
  }
  return total;
}

std::size_t RotationCache::Index(const RotationNode& node) const {
  const std::size_t side = std::size_t{1} << node.level;
  return NodeCount(node.level - 1) +
         (static_cast<std::size_t>(node.ix) * side + node.iy) * side + node.iz;
}

RotationCache::RotationCache(std::span<const Vec3> bearings, int depth,
                             bool parallel)
    : bearings_(bearings),
      depth_(depth),
      num_bearings_(static_cast<int>(bearings.size())) {
  if (depth < 0) throw std::invalid_argument("cache depth must be >= 0");
  const std::size_t nodes = NodeCount(depth);
  const std::size_t n = bearings.size();
  present_.assign(nodes, 0);
  rotated_.resize(nodes * n);
  memos_.resize(nodes);
  psi_weak_.assign(nodes, 0.0);

  for (int level = 0; level <= depth; ++level) {
    const long side = 1L << level;
    const long count = side * side * side;
    const std::size_t base = NodeCount(level - 1);
    auto fill = [&](long c) {
      const RotationNode node{level, static_cast<int>(c / (side * side)),
                              static_cast<int>((c / side) % side),
                              static_cast<int>(c % side)};
      const Cuboid cube = node.Cube();
      if (!IntersectsPiBall(cube)) return;
      const std::size_t idx = base + static_cast<std::size_t>(c);
      const Mat3 rt = Rodrigues(cube.center).transpose();
      for (std::size_t i = 0; i < n; ++i) rotated_[idx * n + i] = rt * bearings[i];
      memos_[idx].Reset(static_cast<int>(n));
      psi_weak_[idx] = PsiRotationWeak(cube);
      present_[idx] = 1;
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
      for (long c = 0; c < count; ++c) fill(c);
    } else {
      for (long c = 0; c < count; ++c) fill(c);
    }
  }
  for (std::uint8_t p : present_) num_stored_ += p;
}

bool RotationCache::Lookup(const RotationNode& node, bool tight,
                           const LazySurfaceSampler* lazy,
                           RotationTerms* out) const {
  if (node.level > depth_) return false;
  const std::size_t idx = Index(node);
  if (!present_[idx]) return false;
  const std::size_t n = static_cast<std::size_t>(num_bearings_);
  out->original = bearings_;
  out->rotated = std::span<const Vec3>(rotated_.data() + idx * n, n);
  out->psi_weak = psi_weak_[idx];
  out->memo = tight ? &memos_[idx] : nullptr;
  out->lazy = tight ? lazy : nullptr;
  return true;
}

std::span<const Vec3> RotationCache::Rotated(const RotationNode& node) const {
  if (node.level > depth_) return {};
  const std::size_t idx = Index(node);
  if (!present_[idx]) return {};
  const std::size_t n = static_cast<std::size_t>(num_bearings_);
  return std::span<const Vec3>(rotated_.data() + idx * n, n);
}

}  // namespace gopac
