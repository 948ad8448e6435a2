#include <benchmark/benchmark.h>

#include "nbcoll/blowup.hpp"
#include "nbcoll/equilibria.hpp"
#include "nbcoll/pipeline.hpp"
#include "nbcoll/verify.hpp"

namespace {

using namespace nbcoll;

const MassSystem kFour({1.0, 0.8, 1.3, 1.1});

BlowupState generic_state() {
  BlowupState bs;
  bs.rho = 0.8;
  bs.R = -0.4;
  bs.S = (VecX(5) << 0.1, 0.2, -0.15, 0.05, 0.1).finished();
  bs.sigma = (VecX(5) << 0.3, -0.4, 0.2, -0.9, 0.35).finished();
  bs.u = 0.3;
  bs.v = -0.2;
  bs.alpha = 0.4;
  return bs;
}

void BM_BlowupField(benchmark::State& state) {
  const BlowupState bs = generic_state();
  FieldOptions fo;
  fo.mode = static_cast<GradientMode>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(blowup_field(kFour, bs, {}, fo));
}
BENCHMARK(BM_BlowupField)->Arg(static_cast<int>(GradientMode::FiniteDifference))->Arg(static_cast<int>(GradientMode::AutoDiff));

void BM_FindCentralConfig(benchmark::State& state) {
  const MassSystem ms({1.0, 1.0, 1.0, 1.0});
  VecX guess = configuration_shape(ms, tetrahedron());
  guess.array() += 0.02;
  for (auto _ : state) benchmark::DoNotOptimize(find_central_config(ms, guess));
}
BENCHMARK(BM_FindCentralConfig)->Unit(benchmark::kMillisecond);

void BM_ChartDump(benchmark::State& state) {
  const MassSystem ms({1.0, 2.0, 0.7});
  CartesianState s;
  s.q = {Vec3(0.1, 0.2, -0.3), Vec3(1.0, -0.4, 0.2), Vec3(-0.5, 0.9, 0.4)};
  s.p = {Vec3(0.3, -0.1, 0.2), Vec3(-0.2, 0.4, 0.1), Vec3(0.05, -0.3, -0.3)};
  for (auto _ : state) benchmark::DoNotOptimize(chart_dump(ms, s));
}
BENCHMARK(BM_ChartDump);

void BM_IntegrateBlowup(benchmark::State& state) {
  BlowupOptions bo;
  bo.field.mode = GradientMode::AutoDiff;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_blowup(kFour, generic_state(), 0.0, 1.0, bo));
}
BENCHMARK(BM_IntegrateBlowup)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
