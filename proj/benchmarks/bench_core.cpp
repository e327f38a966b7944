#include <benchmark/benchmark.h>

#include <cmath>

#include "pmc/bifurcation.hpp"
#include "pmc/endpoint.hpp"
#include "pmc/profile.hpp"
#include "pmc/quadrature.hpp"
#include "pmc/timemap.hpp"

namespace {

void BM_IntegrateSingular(benchmark::State& state) {
  pmc::quadrature::IntegralSpec spec;
  spec.integrand = [](double z, double w) { return 1.0 / std::sqrt(z * w); };
  spec.singular_left = true;
  spec.singular_right = true;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-12;
  for (auto _ : state) benchmark::DoNotOptimize(pmc::quadrature::integrate_singular(spec));
}
BENCHMARK(BM_IntegrateSingular);

void BM_TimeMap(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pmc::timemap::time_map(0.3, 0.5));
}
BENCHMARK(BM_TimeMap);

void BM_TimeMapSample(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pmc::timemap::sample(0.2, 1.0));
}
BENCHMARK(BM_TimeMapSample);

void BM_MaxTimeMap(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pmc::bifurcation::max_time_map(1.0));
}
BENCHMARK(BM_MaxTimeMap);

void BM_LambdaSup(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pmc::bifurcation::lambda_sup(0.3));
}
BENCHMARK(BM_LambdaSup)->Unit(benchmark::kMillisecond);

void BM_ComputeLStar(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pmc::endpoint::compute_L_star());
}
BENCHMARK(BM_ComputeLStar);

void BM_ReconstructProfile(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pmc::profile::reconstruct_profile(0.3, 0.5, n));
}
BENCHMARK(BM_ReconstructProfile)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_SweepDiagram(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(pmc::bifurcation::sweep_diagram(0.3, 0.05, 3.0, 50, {.threads = 1}));
  }
}
BENCHMARK(BM_SweepDiagram)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive is LTO bytecode from another compiler build.
BENCHMARK_MAIN();
