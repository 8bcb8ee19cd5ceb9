#include <benchmark/benchmark.h>

#include <random>

#include "fresco/assignment.hpp"

namespace {

fresco::CostMatrix random_costs(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  fresco::CostMatrix c(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t k = 0; k < cols; ++k) c(r, k) = u(rng);
  return c;
}

void BM_Square(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = random_costs(n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(fresco::linear_sum_assignment(c));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Square)->RangeMultiplier(2)->Range(4, 256)->Complexity(benchmark::oNCubed);

void BM_Wide(benchmark::State& state) {
  const auto c = random_costs(8, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(fresco::linear_sum_assignment(c));
}
BENCHMARK(BM_Wide)->Arg(16)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
