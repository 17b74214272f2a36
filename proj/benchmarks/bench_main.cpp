#include <benchmark/benchmark.h>

#include "hd0l/corpus.hpp"
#include "hd0l/matrix.hpp"
#include "hd0l/word.hpp"

using namespace hd0l;

static void BM_ExpandFibonacci(benchmark::State& state) {
  auto fib = Morphism::from_chars({{'a', "ab"}, {'b', "a"}});
  auto a = Letter::intern("a");
  for (auto _ : state)
    benchmark::DoNotOptimize(expand_fixed_point(fib, a, static_cast<std::size_t>(state.range(0))));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExpandFibonacci)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

static void BM_SupportPower(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SupportMatrix m(n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    m.set(i + 1, i);
  m.set(0, n - 1);
  m.set(1, n - 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(is_primitive(m));
}
BENCHMARK(BM_SupportPower)->RangeMultiplier(2)->Range(8, 256);

static void BM_DecideCorpus(benchmark::State& state) {
  const auto& entry = corpus()[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(entry.name);
  for (auto _ : state)
    benchmark::DoNotOptimize(decide_hd0l(entry.system));
}
BENCHMARK(BM_DecideCorpus)->DenseRange(0, 10)->Unit(benchmark::kMillisecond);

static void BM_FactorComplexity(benchmark::State& state) {
  auto tm = Morphism::from_chars({{'a', "ab"}, {'b', "ba"}});
  auto id = Morphism::identity(tm.domain());
  for (auto _ : state)
    benchmark::DoNotOptimize(
        factor_complexity(tm, Letter::intern("a"), id, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_FactorComplexity)->RangeMultiplier(4)->Range(16, 1024);
