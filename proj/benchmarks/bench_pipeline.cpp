// Microbenchmarks for the hot paths: the online scenario path (coefficient
// computation and scenario assembly), copula block draws, and the ECDF /
// Gaussian transforms.

#include <benchmark/benchmark.h>

#include "windscen/copula.hpp"
#include "windscen/ecdf.hpp"
#include "windscen/pipeline.hpp"
#include "windscen/rng.hpp"
#include "windscen/synth.hpp"
#include "windscen/time.hpp"

using namespace windscen;

namespace {

const TimePoint kT0 = parse_iso8601("2025-01-01T00:00:00Z");

struct Fixture {
  RunConfig cfg;
  SyntheticFeed feed;
  TrainedBundle bundle;
  TimePoint at;

  explicit Fixture(int n_farms, int n_tau, int s_max) {
    cfg.horizon.n_tau = n_tau;
    cfg.regression_days = 10;
    cfg.distribution_days = 20;
    cfg.s_max = s_max;
    cfg.copula_stride_steps = 3;
    cfg.oracle.n_farms = n_farms;
    cfg.oracle.n_tau = n_tau;
    feed = generate_feed(cfg.oracle, kT0, 25 * kSecondsPerDay);
    bundle = train(feed.panel, feed.registry, cfg);
    at = bundle.meta.reg_end - cfg.horizon.step_sec;
  }
};

Fixture& fixture() {
  static Fixture f(10, 12, 2000);
  return f;
}

void BM_OnlineCoefficients(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_online(f.bundle, f.feed.panel, f.at));
  }
}
BENCHMARK(BM_OnlineCoefficients);

void BM_AssembleScenarios(benchmark::State& state) {
  Fixture& f = fixture();
  OnlineCoefficients coeffs = compute_online(f.bundle, f.feed.panel, f.at);
  const int S = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_scenarios(f.bundle, coeffs, f.at, S));
  }
  state.SetItemsProcessed(state.iterations() * S * f.bundle.dim());
}
BENCHMARK(BM_AssembleScenarios)->Arg(100)->Arg(1000)->Arg(2000);

void BM_GenerateEndToEnd(benchmark::State& state) {
  Fixture& f = fixture();
  const int S = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate(f.bundle, f.feed.panel, f.at, S));
  }
}
BENCHMARK(BM_GenerateEndToEnd)->Arg(1000);

void BM_DrawBlock(benchmark::State& state) {
  Fixture& f = fixture();
  const int S = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(draw_block(f.bundle.copula, S, 7));
  }
}
BENCHMARK(BM_DrawBlock)->Arg(1000)->Arg(10000);

void BM_EcdfTransforms(benchmark::State& state) {
  Rng rng(11);
  std::vector<double> samples(4096);
  for (auto& v : samples) v = rng.normal();
  EcdfTable t = EcdfTable::from_samples(std::move(samples));
  double g = -3.0;
  for (auto _ : state) {
    g += 0.001;
    if (g > 3.0) g = -3.0;
    benchmark::DoNotOptimize(to_gaussian(from_gaussian(g, t), t));
  }
}
BENCHMARK(BM_EcdfTransforms);

}  // namespace

BENCHMARK_MAIN();
