#include <benchmark/benchmark.h>

#include "bcfdim/augment.hpp"
#include "bcfdim/pressure.hpp"

namespace {

const bcfdim::SystemSpec kBcf = bcfdim::make_system(bcfdim::Family::BCF);

void BM_Continuants(benchmark::State& state) {
  const int len = static_cast<int>(state.range(0));
  for (auto _ : state) {
    bcfdim::MoebiusWord w;
    for (int i = 0; i < len; ++i) w.push_back(2 + i % 7);
    benchmark::DoNotOptimize(w.sup_norm());
  }
  state.SetItemsProcessed(state.iterations() * len);
}
BENCHMARK(BM_Continuants)->Arg(16)->Arg(256)->Arg(4096);

void BM_PartitionSum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = bcfdim::AlphabetSpec::range(3, 8);
  for (auto _ : state) benchmark::DoNotOptimize(bcfdim::partition_sum(kBcf, a, n, 0.7));
}
BENCHMARK(BM_PartitionSum)->DenseRange(2, 7)->Unit(benchmark::kMillisecond);

void BM_TransferCertify(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  const auto a = bcfdim::AlphabetSpec({2, 3, 4, 5});
  const auto cut = bcfdim::resolve_cutoffs(kBcf, a, 0.9, 1e-4);
  bcfdim::TransferEngine engine(bcfdim::compile_generators(kBcf, a, cut), grid);
  engine.iterate(0.9, 12);
  for (auto _ : state) benchmark::DoNotOptimize(engine.certify(0.9));
}
BENCHMARK(BM_TransferCertify)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

void BM_DimensionFourFiveSix(benchmark::State& state) {
  const auto a = bcfdim::AlphabetSpec({4, 5, 6});
  for (auto _ : state) benchmark::DoNotOptimize(bcfdim::dimension_bracket(kBcf, a));
}
BENCHMARK(BM_DimensionFourFiveSix)->Unit(benchmark::kMillisecond);

void BM_Sandwich(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bcfdim::check_sandwich({3, 7, 2}, {4, 2, 6}, 5, 9));
}
BENCHMARK(BM_Sandwich);

}  // namespace

BENCHMARK_MAIN();
