#include "flatform/instance_gen.hpp"
#include "flatform/oracle.hpp"
#include "flatform/structure.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace flatform;

static void BM_Rank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) m(r, c) = Scalar(static_cast<long>(rng() % 7) - 3, 1 + rng() % 4);
  }
  for (auto _ : state) benchmark::DoNotOptimize(rank(m));
}
BENCHMARK(BM_Rank)->Arg(8)->Arg(16)->Arg(32);

static void BM_Gen(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen(FamilySpec{Family::composition, n, n - 1, seed++}));
}
BENCHMARK(BM_Gen)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_Analyze(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Generated g = gen(FamilySpec{Family::composition, n, n - 1, 4});
  for (auto _ : state) benchmark::DoNotOptimize(analyze(g.kp, {4}));
}
BENCHMARK(BM_Analyze)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_Oracle(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Generated g = gen(FamilySpec{Family::composition, n, n - 1, 4});
  for (auto _ : state) benchmark::DoNotOptimize(oracle::compute(g.kp));
}
BENCHMARK(BM_Oracle)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
