#include <benchmark/benchmark.h>

#include <numeric>

#include "qumark/keys.hpp"
#include "qumark/stats.hpp"
#include "qumark/watermark.hpp"

using namespace qumark;

namespace {

BitVector pattern_bits(std::size_t n) {
  BitVector bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>((i * 2654435761u) >> 31 & 1);
  return bits;
}

void BM_Measure(benchmark::State& state) {
  RandomSource rng(1);
  RebitState s(30.0);
  Basis b(0.0);
  for (auto _ : state) benchmark::DoNotOptimize(measure(s, b, rng));
}
BENCHMARK(BM_Measure);

void BM_EmbedObserve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto message = build_message(pattern_bits(n), Basis(0.0));
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  WatermarkSecret secret(all, Basis(45.0));
  RandomSource rng(2);
  for (auto _ : state) {
    auto marked = embed(message, secret, rng);
    benchmark::DoNotOptimize(observe(marked, Basis(0.0), rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmbedObserve)->Arg(4096)->Arg(100000);

void BM_DeriveIndices(benchmark::State& state) {
  auto key = keys::SecretKey::from_seed(3);
  keys::DerivationParams params{131072, static_cast<std::size_t>(state.range(0)), std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(keys::derive_indices(key, params));
}
BENCHMARK(BM_DeriveIndices)->Arg(64)->Arg(4096);

void BM_RecommendedSampleSize(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::recommended_sample_size(0.5, 0.45, 0.99, 0.99));
  }
}
BENCHMARK(BM_RecommendedSampleSize)->Unit(benchmark::kMillisecond);

void BM_ExactPValue(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::binomial_two_sided_p_value(5300, 10000, 0.5));
  }
}
BENCHMARK(BM_ExactPValue);

}  // namespace

BENCHMARK_MAIN();
