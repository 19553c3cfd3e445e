#include <benchmark/benchmark.h>

#include <random>

#include "acbench/features.hpp"
#include "acbench/fft.hpp"
#include "acbench/learners.hpp"
#include "acbench/synth.hpp"

using namespace acbench;

namespace {

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  std::vector<dsp::Complex> x(n);
  for (auto& v : x) v = {d(rng), d(rng)};
  for (auto _ : state) {
    auto y = x;
    dsp::fft_inplace(y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

void BM_ExtractAll(benchmark::State& state) {
  synth::GeneratorConfig g;
  g.duration_s = static_cast<double>(state.range(0)) / 1000.0;
  const auto x = synth::generate_sample(synth::FaultClass::ModerateFault, 3, g);
  for (auto _ : state) benchmark::DoNotOptimize(features::extract_all(x).values.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_ExtractAll)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

struct Data {
  Matrix x;
  std::vector<int> y;
};

const Data& training_data() {
  static const Data data = [] {
    synth::GeneratorConfig g;
    g.samples_per_class = 40;
    g.duration_s = 0.25;
    auto corpus = synth::generate_dataset(g);
    auto x = features::extract_batch(corpus.signals);
    return Data{features::Scaler::fit(x).transform(x), corpus.dataset.labels};
  }();
  return data;
}

void BM_Train(benchmark::State& state) {
  const auto kind = static_cast<learn::ModelKind>(state.range(0));
  const auto& d = training_data();
  const auto spec = learn::default_spec(kind, 7);
  state.SetLabel(spec.display_name());
  for (auto _ : state) benchmark::DoNotOptimize(learn::train(spec, d.x, d.y).model.get());
}
BENCHMARK(BM_Train)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_PredictProba(benchmark::State& state) {
  const auto kind = static_cast<learn::ModelKind>(state.range(0));
  const auto& d = training_data();
  const auto spec = learn::default_spec(kind, 7);
  const auto m = learn::train(spec, d.x, d.y);
  state.SetLabel(spec.display_name());
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.model->predict_proba(d.x.row(i)).data());
    i = (i + 1) % d.x.rows();
  }
}
BENCHMARK(BM_PredictProba)->DenseRange(0, 5)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
