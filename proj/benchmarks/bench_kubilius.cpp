#include <benchmark/benchmark.h>

#include "kubilius/counting.hpp"
#include "kubilius/moments.hpp"
#include "kubilius/sampler.hpp"

using namespace kubilius;

namespace {

void BM_QTableExact(benchmark::State& state) {
  const auto cls = builtin_class("mappings");
  const auto N = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(q_table(cls, N, Mode::exact));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_QTableExact)->RangeMultiplier(2)->Range(25, 400)->Complexity();

void BM_QTableScaled(benchmark::State& state) {
  const auto cls = builtin_class("mappings");
  const auto N = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(q_table(cls, N, Mode::scaled));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_QTableScaled)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oNSquared);

void BM_ExclusionsExact(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const CountingEngine engine(builtin_class("forests"));
    engine.prepare_exclusions(N, Mode::exact);
  }
}
BENCHMARK(BM_ExclusionsExact)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_MarkedSumsExact(benchmark::State& state) {
  const CountingEngine engine(builtin_class("permutations"));
  const auto h = builtin_family("w").at(0);
  const auto N = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(marked_sums_exact(engine, N, h));
}
BENCHMARK(BM_MarkedSumsExact)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_MarkedSumsScaled(benchmark::State& state) {
  const CountingEngine engine(builtin_class("mappings"));
  const auto h = builtin_family("distinct").at(0);
  const auto N = static_cast<std::size_t>(state.range(0));
  engine.scaled_weights(N);
  for (auto _ : state) benchmark::DoNotOptimize(marked_sums_scaled(engine, N, h));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MarkedSumsScaled)->RangeMultiplier(2)->Range(100, 1600)->Complexity();

void BM_SweepHalfExact(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const CountingEngine engine(builtin_class("two_regular_graphs"));
    benchmark::DoNotOptimize(tk_ratio_sweep(engine, builtin_family("half"), 1, N, Mode::exact));
  }
}
BENCHMARK(BM_SweepHalfExact)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SampleProfile(benchmark::State& state) {
  const auto cls = builtin_class("permutations");
  const auto n = static_cast<std::size_t>(state.range(0));
  const ProfileSampler sampler(cls, n, tune_tilt(cls, n).x);
  Rng rng = make_stream(1, 0);
  std::uint64_t rejections = 0;
  for (auto _ : state) rejections += sampler.draw(rng, 10'000'000).rejections;
  state.counters["rejections/sample"] =
      benchmark::Counter(static_cast<double>(rejections), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SampleProfile)->Arg(20)->Arg(50)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
