#include <benchmark/benchmark.h>

#include <random>

#include "dynamo/branch.hpp"
#include "dynamo/eig.hpp"
#include "dynamo/pencil.hpp"

using namespace dynamo;

namespace {

void BM_DenseSpectrumRandom(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(eig::dense_spectrum(h));
  state.SetComplexityN(n);
}
BENCHMARK(BM_DenseSpectrumRandom)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

void BM_DenseSpectrumOperator(benchmark::State& state) {
  const auto scheme = static_cast<radial::Scheme>(state.range(1));
  const auto op = radial::assemble(radial::AlphaProfile::quartic_reference(10.0), 1,
                                   radial::RadialGrid::make(scheme, static_cast<int>(state.range(0))),
                                   radial::BoundaryCondition::Physical);
  for (auto _ : state) benchmark::DoNotOptimize(eig::dense_spectrum(op.matrix));
}
BENCHMARK(BM_DenseSpectrumOperator)
    ->ArgsProduct({{32, 64, 96},
                   {static_cast<int>(radial::Scheme::FiniteDifference2),
                    static_cast<int>(radial::Scheme::LegendreGalerkin)}})
    ->Unit(benchmark::kMillisecond);

void BM_EigenBackend(benchmark::State& state) {
  const auto op = radial::assemble(radial::AlphaProfile::quartic_reference(10.0), 1,
                                   radial::RadialGrid::make(radial::Scheme::FiniteDifference2,
                                                            static_cast<int>(state.range(0))),
                                   radial::BoundaryCondition::Physical);
  for (auto _ : state)
    benchmark::DoNotOptimize(eig::dense_spectrum(op.matrix, {.backend = eig::Backend::Eigen}));
}
BENCHMARK(BM_EigenBackend)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  const branch::SweepConfig cfg{radial::AlphaProfile::quartic_reference(), 1, radial::BoundaryCondition::Physical,
                                radial::RadialGrid::make(radial::Scheme::FiniteDifference2, 48)};
  const auto grid = branch::uniform_grid(0.0, 40.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto s = branch::sweep(cfg, grid);
    benchmark::DoNotOptimize(branch::match_branches(s, 18));
  }
}
BENCHMARK(BM_Sweep)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_PencilEquivalence(benchmark::State& state) {
  const auto p = pencil::build_pencil(radial::AlphaProfile{{1.0, 0.0, -0.9}, 4.5}, 1,
                                      radial::RadialGrid::make(radial::Scheme::LegendreGalerkin, 16),
                                      radial::BoundaryCondition::Idealized);
  for (auto _ : state) benchmark::DoNotOptimize(pencil::pencil_linear_equivalence(
      p, radial::assemble(p.profile, 1, p.grid, p.bc)));
}
BENCHMARK(BM_PencilEquivalence)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
