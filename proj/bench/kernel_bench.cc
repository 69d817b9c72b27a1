// Serial reference against the OpenMP version of each parallel kernel.

#include <utility>

#include <benchmark/benchmark.h>

#include "gopac/kernels.h"
#include "gopac/oracle.h"
#include "gopac/rotation_cache.h"
#include "gopac/synth.h"

namespace gopac {
namespace {

std::pair<ProblemInstance, GroundTruth> Scene(int m) {
  SynthConfig cfg;
  cfg.num_points = m;
  cfg.omega_2d = 0.25;
  cfg.seed = 7;
  return Generate(cfg);
}

// A rotation cube around the true rotation and a translation cube around the
// true centre, so most bearings reach the exact box test.
struct CubePair {
  explicit CubePair(int m) {
    auto [scene, gt] = Scene(m);
    inst = std::move(scene);
    rot.Reset({gt.pose.r, Vec3::Constant(0.05)}, inst.bearings,
              BoundMode::kGamma, kDefaultPsiPitchDivisor);
    trans = TranslationTerms::Build(inst.points, {gt.pose.t, Vec3::Constant(0.2)},
                                    BoundMode::kGamma, true);
  }

  ProblemInstance inst;
  RotationTermsBuffer rot;
  TranslationTerms trans;
};

void BM_CountCubeSerial(benchmark::State& state) {
  const CubePair p(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        CountCubeSerial(p.rot.view(), p.trans, p.inst.theta, -1));
  }
}

void BM_CountCubeParallel(benchmark::State& state) {
  const CubePair p(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        CountCubeParallel(p.rot.view(), p.trans, p.inst.theta, -1));
  }
}

void BM_RotationCache(benchmark::State& state, bool parallel) {
  const auto [inst, gt] = Scene(50);
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const RotationCache cache(inst.bearings, depth, parallel);
    benchmark::DoNotOptimize(cache.num_stored());
  }
}

void BM_GridSearch(benchmark::State& state, bool parallel) {
  auto [inst, gt] = Scene(8);
  inst.translation_domain.cuboids = {{gt.pose.t, Vec3::Constant(0.1)}};
  GridOptions opt;
  opt.rot_step = 0.2;
  opt.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(GridSearch(inst, opt).nu);
}

BENCHMARK(BM_CountCubeSerial)->Arg(50)->Arg(500);
BENCHMARK(BM_CountCubeParallel)->Arg(50)->Arg(500);
BENCHMARK_CAPTURE(BM_RotationCache, serial, false)->Arg(3)->Arg(5)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RotationCache, parallel, true)->Arg(3)->Arg(5)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GridSearch, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GridSearch, parallel, true)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace gopac

BENCHMARK_MAIN();
