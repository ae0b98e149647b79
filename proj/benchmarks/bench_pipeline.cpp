#include <benchmark/benchmark.h>

#include <vector>

#include "egogaze/features.hpp"
#include "egogaze/pipeline.hpp"
#include "egogaze/synthetic.hpp"
#include "egogaze/temporal.hpp"

namespace {

using namespace egogaze;

void BM_FeatureConfig(benchmark::State& state) {
  const auto frame = synthetic::MovingSquare{}.frame(0);
  const auto g = build_geometry(frame.width, frame.height, static_cast<int>(state.range(0)));
  const FeatureScheme scheme;
  for (auto _ : state) benchmark::DoNotOptimize(feature_config(frame, g, scheme));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FeatureConfig)->Arg(8)->Arg(16)->Arg(32);

void BM_TemporalAggregate(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const synthetic::MovingSquare sq;
  const auto g = build_geometry(sq.width, sq.height, 16);
  HistoryBuffer history(k);
  for (int t = 0; t < k; ++t) history.push(feature_config(sq.frame(t), g, FeatureScheme{}));
  const auto current = feature_config(sq.frame(k), g, FeatureScheme{});
  const auto weights = decay_weights(k, DecayParams{});
  const EnergyParams params;
  for (auto _ : state) benchmark::DoNotOptimize(temporal_aggregate(current, history, weights, params));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TemporalAggregate)->Arg(1)->Arg(10)->Arg(30);

// Steady-state cost of one frame through the whole pipeline (640x480, N=16, k=30).
void BM_ProcessFrame(benchmark::State& state) {
  const synthetic::MovingSquare sq;
  std::vector<Frame> frames;
  for (int t = 0; t < 64; ++t) frames.push_back(sq.frame(t));
  RunConfig config;
  config.k = 30;
  Pipeline pipeline(config);
  std::int64_t index = 0;
  for (auto _ : state) {
    Frame& f = frames[static_cast<std::size_t>(index % 64)];
    f.index = index++;
    benchmark::DoNotOptimize(pipeline.process_frame(f));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ProcessFrame);

}  // namespace

BENCHMARK_MAIN();
