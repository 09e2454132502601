#include <benchmark/benchmark.h>

#include "lvs/simulator.hpp"

using namespace lvs;

namespace {

NetworkGeometry geometry(std::size_t k) {
  GeometrySpec spec;
  spec.count = k;
  return make_geometry(spec, 42);
}

MeasurementMatrix measurement(const NetworkGeometry& g, const ChannelParams& p) {
  Rng rng = make_rng(1, Stream::kLegitimateTrial, 0);
  return sample_around(claimed_means(g, p), p.shadowing_sigma_dB, 1, rng);
}

void BM_FarFieldStatistic(benchmark::State& state) {
  const auto g = geometry(static_cast<std::size_t>(state.range(0)));
  const ChannelParams p;
  const DecisionStatistic stat(g, p, FarField{}, RuleKind::kFfaLinear);
  const auto m = measurement(g, p);
  for (auto _ : state) benchmark::DoNotOptimize(stat(m));
}
BENCHMARK(BM_FarFieldStatistic)->Arg(4)->Arg(10)->Arg(64);

void BM_MarginalCircle(benchmark::State& state) {
  const auto g = geometry(10);
  const ChannelParams p;
  const DecisionStatistic stat(g, p, CircleUda{300}, RuleKind::kLrtExact);
  const auto m = measurement(g, p);
  for (auto _ : state) benchmark::DoNotOptimize(stat(m));
}
BENCHMARK(BM_MarginalCircle);

void BM_MarginalAnnulus(benchmark::State& state) {
  const auto g = geometry(static_cast<std::size_t>(state.range(0)));
  const ChannelParams p;
  const DecisionStatistic stat(g, p, AnnulusMd{100, 500}, RuleKind::kLrtExact);
  const auto m = measurement(g, p);
  for (auto _ : state) benchmark::DoNotOptimize(stat(m));
}
BENCHMARK(BM_MarginalAnnulus)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_Laplace(benchmark::State& state) {
  const auto g = geometry(8);
  const ChannelParams p;
  const auto m = measurement(g, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_lik_h1_laplace(m, g, p, AnnulusMd{100, 500}));
  }
}
BENCHMARK(BM_Laplace)->Unit(benchmark::kMicrosecond);

void BM_EstimateRatesFarField(benchmark::State& state) {
  ExperimentConfig c;
  c.rule = StatisticKind::kFfaLinear;
  c.trials = static_cast<std::size_t>(state.range(0));
  c.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_rates(c));
}
BENCHMARK(BM_EstimateRatesFarField)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
