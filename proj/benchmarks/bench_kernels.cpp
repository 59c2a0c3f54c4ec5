#include <benchmark/benchmark.h>

#include "levylab/ladder.hpp"
#include "levylab/pathsim.hpp"
#include "levylab/tail_classes.hpp"

using namespace levylab;

namespace {

LevyModel mm1() { return LevyModel::compound_poisson(-1.0, {1.0, JumpLaw::exponential(2.0)}); }

LevyModel model_c() {
  return LevyModel::compound_poisson(-2.0, {1.0, JumpLaw::tilted_pareto(1.0, 2.0)});
}

void BM_FirstPassageTable(benchmark::State& state) {
  const auto wh = ladder::wh_factorize(model_c());
  const double x_max = static_cast<double>(state.range(0));
  for (auto _ : state) {
    ladder::FirstPassageTable t(wh.ascending, x_max, wh.ascending.tail_rate);
    benchmark::DoNotOptimize(t.value(x_max - 1.0));
  }
}
BENCHMARK(BM_FirstPassageTable)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_VigonInverse(benchmark::State& state) {
  const LevyModel m = model_c();
  const auto wh = ladder::wh_factorize(m);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ladder::vigon_inverse(m, wh.descending, 10.0 + x));
    x = x > 20.0 ? 0.0 : x + 0.1;
  }
}
BENCHMARK(BM_VigonInverse);

void BM_ConvolutionTail(benchmark::State& state) {
  const auto g = tails::Distribution::of(JumpLaw::tilted_pareto(1.0, 2.0));
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tails::log_conv_tail(g, x));
}
BENCHMARK(BM_ConvolutionTail)->Arg(10)->Arg(40)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_TiltedFirstPassage(benchmark::State& state) {
  const LevyModel m = mm1();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sim::estimate_first_passage(m, 3.0, 16384, seed++, sim::Method::tilted).estimate.value);
  }
  state.SetItemsProcessed(state.iterations() * 16384);
}
BENCHMARK(BM_TiltedFirstPassage)->Unit(benchmark::kMillisecond);

void BM_ExcursionTail(benchmark::State& state) {
  const LevyModel m = mm1();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const auto rows = sim::estimate_excursion_tail(m, {2.0, 4.0}, 65536, seed++);
    benchmark::DoNotOptimize(rows.front().estimate.value);
  }
  state.SetItemsProcessed(state.iterations() * 65536);
}
BENCHMARK(BM_ExcursionTail)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
