#include <benchmark/benchmark.h>

#include "gmy/pipeline.hpp"

using namespace gmy;

namespace {

HyperbolicParams logistic_params() {
  HyperbolicParams hp;
  hp.sigma = 0.8L;
  hp.delta = 0.01L;
  hp.b = 0.3L;
  return hp;
}

void BM_HyperbolicFast(benchmark::State& st) {
  const MapSpec l = make_logistic();
  const HyperbolicParams hp = logistic_params();
  const OrbitBuffer o = iterate_orbit(l, 0.3L, static_cast<std::size_t>(st.range(0)), hp.delta, 1);
  for (auto _ : st) benchmark::DoNotOptimize(hyperbolic_times_fast(o, hp));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_HyperbolicFast)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

void BM_HyperbolicNaive(benchmark::State& st) {
  const MapSpec l = make_logistic();
  const HyperbolicParams hp = logistic_params();
  const OrbitBuffer o = iterate_orbit(l, 0.3L, static_cast<std::size_t>(st.range(0)), hp.delta, 1);
  for (auto _ : st) {
    std::size_t c = 0;
    for (std::size_t n = 1; n <= o.length(); ++n) c += is_hyperbolic_time(o, n, hp);
    benchmark::DoNotOptimize(c);
  }
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_HyperbolicNaive)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_IterateOrbit(benchmark::State& st) {
  const MapSpec m = make_builtin(st.range(0) ? "manneville_pomeau" : "logistic");
  for (auto _ : st) benchmark::DoNotOptimize(iterate_orbit(m, 0.3L, 10000, 0.01L, 1));
  st.SetItemsProcessed(st.iterations() * 10000);
}
BENCHMARK(BM_IterateOrbit)->Arg(0)->Arg(1);

void BM_PreballPullback(benchmark::State& st) {
  const MapSpec t = make_doubling();
  HyperbolicParams hp;
  hp.sigma = 0.6L;
  const auto n = static_cast<std::size_t>(st.range(0));
  const OrbitBuffer o = iterate_orbit(t, 0.2L, n, hp.delta, 1);
  for (auto _ : st) benchmark::DoNotOptimize(build_preball(t, o, n, 0.1L, hp));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_PreballPullback)->Arg(10)->Arg(40)->Arg(160)->Complexity(benchmark::oN);

void BM_PointPullback(benchmark::State& st) {
  const MapSpec mp = make_manneville_pomeau(0.5L);
  const OrbitBuffer o = iterate_orbit(mp, 0.61L, 64, 1, 1);
  const std::vector<Real> path(o.points.begin(), o.points.end() - 1);
  for (auto _ : st) benchmark::DoNotOptimize(pull_point_along(mp, path, o.points.back()));
}
BENCHMARK(BM_PointPullback);

void BM_InduceDoubling(benchmark::State& st) {
  RunConfig c = load_config(std::string(GMY_CONFIG_DIR) + "/doubling.json");
  c.n_max = static_cast<std::size_t>(st.range(0));
  c.workers = 1;
  const MapSpec spec = make_map(c);
  const Analysis a = analyze(c, spec);
  for (auto _ : st) benchmark::DoNotOptimize(induce(c, spec, a));
}
BENCHMARK(BM_InduceDoubling)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_UlamLogistic(benchmark::State& st) {
  UlamOptions o;
  o.bins = static_cast<std::size_t>(st.range(0));
  o.samples_per_bin = 200;
  o.workers = 1;
  const MapSpec l = make_logistic();
  for (auto _ : st) benchmark::DoNotOptimize(ulam_density(l, o));
}
BENCHMARK(BM_UlamLogistic)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
