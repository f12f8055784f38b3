// Serial reference drivers against their OpenMP counterparts.

#include "bohr/audit.hpp"

#include <benchmark/benchmark.h>

using namespace bohr;

namespace {

const SetFamily& small_family() {
  static const SetFamily fam = [] {
    BuildConfig cfg;
    cfg.grid_denom_max = 12;
    cfg.c[2] = Rat(101, 16);
    return build_family(2, 2, cfg);
  }();
  return fam;
}

void BM_MinimalConstantsSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimal_constants_serial(Rat(1, 2), state.range(0), ResidueRanges::all()));
  }
}

void BM_MinimalConstantsParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimal_constants(Rat(1, 2), state.range(0), ResidueRanges::all()));
  }
}

void BM_GridAuditSerial(benchmark::State& state) {
  const SetFamily& fam = small_family();
  for (auto _ : state) benchmark::DoNotOptimize(grid_audit_serial(fam, state.range(0)));
}

void BM_GridAuditParallel(benchmark::State& state) {
  const SetFamily& fam = small_family();
  for (auto _ : state) benchmark::DoNotOptimize(grid_audit(fam, state.range(0)));
}

BuildConfig paper_cfg() {
  BuildConfig cfg;
  cfg.track = Track::Paper;
  return cfg;
}

void BM_DichotomyAuditSerial(benchmark::State& state) {
  const BuildConfig cfg = paper_cfg();
  for (auto _ : state) {
    benchmark::DoNotOptimize(dichotomy_audit_serial({Rat(1, 2)}, state.range(0), {1, 2, 3}, {1, 2}, cfg));
  }
}

void BM_DichotomyAuditParallel(benchmark::State& state) {
  const BuildConfig cfg = paper_cfg();
  for (auto _ : state) {
    benchmark::DoNotOptimize(dichotomy_audit({Rat(1, 2)}, state.range(0), {1, 2, 3}, {1, 2}, cfg));
  }
}

}  // namespace

BENCHMARK(BM_MinimalConstantsSerial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinimalConstantsParallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridAuditSerial)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridAuditParallel)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DichotomyAuditSerial)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DichotomyAuditParallel)->Arg(24)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
