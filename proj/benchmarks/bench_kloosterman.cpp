#include <benchmark/benchmark.h>

#include "sks/kloosterman.hpp"

using namespace sks;

static void BM_ks_direct_9I2(benchmark::State& state) {
    DiagonalModulus c = DiagonalModulus::prime_power(3, {2, 2});
    HalfIntegralSym q = HalfIntegralSym::from_doubled_rows({{2, 1}, {1, 4}});
    HalfIntegralSym t = HalfIntegralSym::from_doubled_rows({{0, 1}, {1, 2}});
    for (auto _ : state) benchmark::DoNotOptimize(ks_direct(q, t, c));
}
BENCHMARK(BM_ks_direct_9I2);

static void BM_evaluator_reuse(benchmark::State& state) {
    KsEvaluator ev(DiagonalModulus::prime_power(3, {2, 3}));
    HalfIntegralSym q = HalfIntegralSym::from_doubled_rows({{2, 1}, {1, 4}});
    HalfIntegralSym t = HalfIntegralSym::from_doubled_rows({{0, 1}, {1, 2}});
    for (auto _ : state) benchmark::DoNotOptimize(ev.eval(q, t));
}
BENCHMARK(BM_evaluator_reuse);

static void BM_classical_c199(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(ks_classical(1, 1, 199));
}
BENCHMARK(BM_classical_c199);

static void BM_collect_witnesses_diag_9_27(benchmark::State& state) {
    DiagonalModulus c = DiagonalModulus::prime_power(3, {2, 3});
    for (auto _ : state) benchmark::DoNotOptimize(collect_witnesses(c));
}
BENCHMARK(BM_collect_witnesses_diag_9_27);

BENCHMARK_MAIN();
