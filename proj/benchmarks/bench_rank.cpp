#include <benchmark/benchmark.h>

#include <map>

#include "fresco/archive.hpp"
#include "fresco/synth.hpp"

namespace {

const std::vector<fresco::ImageRecord>& corpus(std::size_t n) {
  static std::map<std::size_t, std::vector<fresco::ImageRecord>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    fresco::SynthOptions o;
    o.n = n;
    o.seed = 10;
    it = cache.emplace(n, fresco::synthesize(o).records).first;
  }
  return it->second;
}

void BM_Build(benchmark::State& state) {
  const auto& records = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fresco::Archive::build(records));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Build)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Rank(benchmark::State& state) {
  const auto archive = fresco::Archive::build(corpus(static_cast<std::size_t>(state.range(0))));
  const std::string ref = archive.record(0).image_id;
  for (auto _ : state) benchmark::DoNotOptimize(fresco::rank(archive, ref, {}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rank)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Score(benchmark::State& state) {
  const auto archive = fresco::Archive::build(corpus(200));
  std::size_t j = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fresco::fresco_score(archive.record(0), archive.record(j), archive.traits(0),
                                                  archive.traits(j)));
    j = j % 199 + 1;
  }
}
BENCHMARK(BM_Score);

}  // namespace

BENCHMARK_MAIN();
