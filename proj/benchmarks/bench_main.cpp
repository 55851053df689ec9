#include <benchmark/benchmark.h>

#include "smd/generalization.hpp"
#include "smd/model.hpp"
#include "smd/potentials.hpp"
#include "smd/theory.hpp"
#include "smd/trainer.hpp"

using namespace smd;

namespace {

// One pass over the data; the tolerance is out of reach so exactly one epoch runs.
void BM_SmdEpoch(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const Potential p = state.range(1) == 2 ? Potential::l2() : Potential::l1();
  const auto model = make_model1(d, kDefaultEpsilon, 1.0, 0);
  const Dataset data = sample_dataset(model, d / 10, 0);
  TrainSettings s = TrainSettings::defaults_for(p);
  s.max_epochs = 1;
  s.residual_tol = 1e-300;
  for (auto _ : state) benchmark::DoNotOptimize(smd_fit(data, p, s).w.data());
  state.SetItemsProcessed(state.iterations() * data.n());
}
BENCHMARK(BM_SmdEpoch)->Args({1000, 2})->Args({1000, 1})->Args({10000, 2})->Args({10000, 1})
    ->Unit(benchmark::kMillisecond);

void BM_SgdSaddle(benchmark::State& state) {
  const MeanStats st = concentrated_model1_stats(1000, kDefaultEpsilon);
  for (auto _ : state) benchmark::DoNotOptimize(sgd_predict(st, 500, 1000, 1, 1).error);
}
BENCHMARK(BM_SgdSaddle)->Unit(benchmark::kMillisecond);

void BM_L1Model1Saddle(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(l1_model1_predict(500, 1000, kDefaultEpsilon).error);
}
BENCHMARK(BM_L1Model1Saddle)->Unit(benchmark::kMillisecond);

void BM_QFunction(benchmark::State& state) {
  double x = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_function(x));
    x = x > 30.0 ? -5.0 : x + 0.37;
  }
}
BENCHMARK(BM_QFunction);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another compiler release.
BENCHMARK_MAIN();
