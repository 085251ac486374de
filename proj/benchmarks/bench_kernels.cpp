#include <benchmark/benchmark.h>

#include "uncertlab/distance.hpp"
#include "uncertlab/gip.hpp"
#include "uncertlab/shift_graph.hpp"

using namespace uncertlab;

namespace {

IndexSubset range_subset(std::uint32_t from, std::uint32_t to, std::uint32_t n) {
  std::vector<std::uint32_t> v;
  for (std::uint32_t i = from; i <= to; ++i) v.push_back(i);
  return IndexSubset(std::move(v), n);
}

void BM_GipRep(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  protocols::IsrBlockKernel kernel(0.5, 42, width);
  const std::vector<std::uint64_t> alice(width, 0ull);
  const std::vector<std::vector<std::uint64_t>> targets(
      4, std::vector<std::uint64_t>(width, ~0ull));
  int signs[4];
  std::uint64_t rep = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(kernel.run_rep(rep++, alice, targets, signs));
  state.SetItemsProcessed(state.iterations() * width);
}
BENCHMARK(BM_GipRep)->Arg(256)->Arg(512);

void BM_DistanceTrial(benchmark::State& state) {
  const std::uint32_t n = 1000;
  const auto f = functions::FunctionSpec::subset_majority(range_subset(1, 960, n));
  const auto g = functions::FunctionSpec::subset_majority(range_subset(1, 1000, n));
  const auto dist = samplers::DistributionSpec::uniform_pairs(n);
  Rng rng(7);
  for (auto _ : state) {
    const auto d = samplers::sample(dist, rng);
    benchmark::DoNotOptimize(f.evaluate(d) != g.evaluate(d));
  }
}
BENCHMARK(BM_DistanceTrial);

void BM_Chromatic(benchmark::State& state) {
  const auto g = reductions::shift_graph(8, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(reductions::chromatic_number_exact(g));
}
BENCHMARK(BM_Chromatic);

}  // namespace
