#include <benchmark/benchmark.h>

#include <cmath>

#include "edgeworth/edgeworth.hpp"

namespace {

using namespace edgeworth;

void BM_LossExpansion(benchmark::State& state) {
  const EdgeworthModel m(0.5, 1.0, 0.6, 25);
  double alpha = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss_expansion(m, alpha));
    alpha = alpha > 3.0 ? 0.5 : alpha + 1e-3;
  }
}
BENCHMARK(BM_LossExpansion);

void BM_OracleQuadrature(benchmark::State& state) {
  const EdgeworthModel m(0.5, 1.0, 0.6, 25);
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        quadrature([&](double t) { return (1.0 - t) * density_expansion(m, t); }, 0.0, 1.0, tol));
  }
}
BENCHMARK(BM_OracleQuadrature)->Arg(8)->Arg(10)->Arg(12);

void BM_EstimateCumulants(benchmark::State& state) {
  const auto s = sample(ReferenceDistribution::shifted_gamma(4.0, 1.0),
                        static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_cumulants(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateCumulants)->Range(1 << 10, 1 << 20);

void BM_SimulateTriplets(benchmark::State& state) {
  ClusterTripletConfig config;
  config.n_triplets = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_triplets(config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateTriplets)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
