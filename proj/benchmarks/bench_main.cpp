#include <benchmark/benchmark.h>

#include "sumprod/dyadic_core.hpp"
#include "sumprod/entropy.hpp"
#include "sumprod/measure.hpp"
#include "sumprod/projection.hpp"
#include "sumprod/rng.hpp"

using namespace sumprod;

namespace {

DeltaSet random_set(int n, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::int64_t> v;
  for (std::size_t i = 0; i < k; ++i) v.push_back(static_cast<std::int64_t>(rng.below(std::uint64_t{1} << n)));
  return DeltaSet::from_unsorted(n, v);
}

void BM_Sumset(benchmark::State& st) {
  const int n = static_cast<int>(st.range(1));
  const auto kernel = static_cast<SumsetKernel>(st.range(0));
  DeltaSet a = random_set(n, std::size_t{1} << (n / 2), 1), b = random_set(n, std::size_t{1} << (n / 2), 2);
  Dyadic c(3, 2);
  for (auto _ : st) benchmark::DoNotOptimize(sumset_size(a, c, b, kernel));
}
BENCHMARK(BM_Sumset)
    ->ArgsProduct({{static_cast<int>(SumsetKernel::direct), static_cast<int>(SumsetKernel::bitset),
                    static_cast<int>(SumsetKernel::fft)},
                   {12, 16, 20}})
    ->Unit(benchmark::kMicrosecond);

void BM_Covering(benchmark::State& st) {
  DeltaSet a = random_set(24, 1 << 16, 3);
  for (auto _ : st) benchmark::DoNotOptimize(covering_number(a, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_Covering)->Arg(8)->Arg(16)->Arg(24);

DiscreteMeasure tree_product(int levels) {
  BranchingProfile half(2, std::vector<std::int64_t>(static_cast<std::size_t>(levels), 2));
  return product_measure(counting_measure(gen_uniform_tree(half, 5)), counting_measure(gen_uniform_tree(half, 6)));
}

void BM_Entropy(benchmark::State& st) {
  DiscreteMeasure mu = tree_product(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(entropy(mu, mu.n() / 2));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * mu.size()));
}
BENCHMARK(BM_Entropy)->Arg(6)->Arg(8);

void BM_ProjectedEntropy(benchmark::State& st) {
  DiscreteMeasure mu = tree_product(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(projected_entropy(mu, Dyadic(5, 3), mu.n()));
}
BENCHMARK(BM_ProjectedEntropy)->Arg(6)->Arg(8);

void BM_L2Projection(benchmark::State& st) {
  DiscreteMeasure mu = tree_product(static_cast<int>(st.range(0)));
  const bool pairs = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(l2_of_projection(mu, Dyadic(5, 3), mu.n(), pairs));
}
BENCHMARK(BM_L2Projection)->Args({5, 0})->Args({5, 1})->Args({8, 0})->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
