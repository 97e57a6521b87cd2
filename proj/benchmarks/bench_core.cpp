#include <benchmark/benchmark.h>

#include "qcorr/correlation.hpp"
#include "qcorr/qfamily.hpp"
#include "qcorr/sync.hpp"

namespace {

using qcorr::CorrelationTensor;
using qcorr::QuantumFamily;
using qcorr::QuantumSpace;
using qcorr::Realization;

const QuantumSpace& bench_P() {
  static const QuantumSpace P({2, 1});
  return P;
}

const QuantumSpace& bench_O() {
  static const QuantumSpace O({2, 1});
  return O;
}

void BM_RandomFamily(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::uint64_t seed = 7;
  for (auto _ : state) {
    QuantumFamily F = qcorr::random_family(bench_P(), bench_O(), d, seed++);
    benchmark::DoNotOptimize(F.gen(0, 0, 0, 0, 0, 0));
  }
}
BENCHMARK(BM_RandomFamily)->Arg(2)->Arg(4)->Arg(8);

void BM_ValidateFamily(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const QuantumFamily F = qcorr::random_family(bench_P(), bench_O(), d, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcorr::validate_family(F).pass);
  }
}
BENCHMARK(BM_ValidateFamily)->Arg(2)->Arg(4)->Arg(8);

void BM_PovmChoiCheck(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const QuantumFamily F = qcorr::random_family(bench_P(), bench_O(), d, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcorr::validate_povm(F).pass);
  }
}
BENCHMARK(BM_PovmChoiCheck)->Arg(2)->Arg(4);

void BM_CorrelationFromTrace(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const QuantumFamily F = qcorr::random_family(bench_P(), bench_O(), d, 7);
  for (auto _ : state) {
    const CorrelationTensor T = qcorr::correlation_from_trace(F);
    benchmark::DoNotOptimize(T.size());
  }
}
BENCHMARK(BM_CorrelationFromTrace)->Arg(2)->Arg(4);

void BM_NonsignallingCheck(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const QuantumFamily F = qcorr::random_family(bench_P(), bench_O(), d, 7);
  const CorrelationTensor T = qcorr::correlation_from_trace(F);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcorr::is_nonsignalling(T).residual);
  }
}
BENCHMARK(BM_NonsignallingCheck)->Arg(2)->Arg(4);

void BM_GnsRealize(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const QuantumFamily F = qcorr::random_family(bench_P(), bench_O(), d, 7);
  for (auto _ : state) {
    const Realization R = qcorr::gns_realization_from_trace(F);
    benchmark::DoNotOptimize(R.xi().size());
  }
}
BENCHMARK(BM_GnsRealize)->Arg(2)->Arg(4);

void BM_AnalyzeSync(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const QuantumFamily F = qcorr::random_family(bench_P(), bench_O(), d, 7);
  const Realization R = qcorr::gns_realization_from_trace(F);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcorr::analyze_synchronous_realization(R).synchronous);
  }
}
BENCHMARK(BM_AnalyzeSync)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
