#include <benchmark/benchmark.h>

#include <numbers>

#include "crot/entanglement.hpp"
#include "crot/protocol.hpp"

namespace {

constexpr double pi = std::numbers::pi;

void BM_Optimum(benchmark::State& state) {
  const crot::ProtocolParams p(pi / 4, pi / 6);
  for (auto _ : state) benchmark::DoNotOptimize(crot::optimum(p));
}
BENCHMARK(BM_Optimum);

void BM_BuildPovm(benchmark::State& state) {
  const crot::ProtocolParams p(pi / 3, pi / 4);
  const crot::OptimumResult o = crot::optimum(p);
  for (auto _ : state) benchmark::DoNotOptimize(crot::build_povm(p, {o.x, o.y}));
}
BENCHMARK(BM_BuildPovm);

void BM_PmaxOracle(benchmark::State& state) {
  const crot::ProtocolParams p(pi / 3, pi / 4);
  const double resolution = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(crot::pmax_oracle(p, resolution));
}
BENCHMARK(BM_PmaxOracle)->Arg(1000)->Arg(1000000)->Unit(benchmark::kMicrosecond);

void BM_RunOnce(benchmark::State& state) {
  const crot::ProtocolParams p(pi / 4, pi / 3);
  const crot::OptimumResult o = crot::optimum(p);
  crot::CounterRng pick(1);
  const crot::StateVector input = crot::random_target_state(pick);
  std::uint64_t stream = 0;
  for (auto _ : state) {
    crot::CounterRng rng(42, stream++);
    benchmark::DoNotOptimize(crot::run_once(p, {o.x, o.y}, input, rng, {.deterministic = state.range(0) != 0}));
  }
}
BENCHMARK(BM_RunOnce)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_MonteCarlo(benchmark::State& state) {
  const crot::ProtocolParams p(pi / 2, pi / 3);
  for (auto _ : state) benchmark::DoNotOptimize(crot::monte_carlo(p, 10000, 1, false));
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);

void BM_Threshold(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(crot::threshold_theta(1e-4));
}
BENCHMARK(BM_Threshold)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
