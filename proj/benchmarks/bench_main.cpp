#include <benchmark/benchmark.h>

#include <cmath>
#include <deforce/analysis.hpp>
#include <deforce/engine.hpp>

using namespace deforce;

static void BM_IntegrateImproper(benchmark::State& state) {
  QuadratureSpec spec;
  spec.rel_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) {
    auto r = integrate_improper([](double x) { return x * x / std::expm1(2.0 * x); }, spec);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_IntegrateImproper)->Arg(6)->Arg(9)->Arg(12);

static void BM_IntegrateDisk(benchmark::State& state) {
  const QuadratureSpec spec;
  for (auto _ : state) {
    auto r = integrate_nd(
        [](std::span<const double> x) { return std::exp(-((x[0] - 0.3) * (x[0] - 0.3) + x[1] * x[1])); },
        Disk{2.0}, spec);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_IntegrateDisk)->Unit(benchmark::kMillisecond);

static void BM_PatchV(benchmark::State& state) {
  const auto g = PatchCorrelation::gaussian();
  const double xi = std::pow(10.0, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(patch_v(xi, g).value);
}
BENCHMARK(BM_PatchV)->Arg(-3)->Arg(0)->Arg(3);

static void BM_PatchZ(benchmark::State& state) {
  const auto g = PatchCorrelation::gaussian();
  for (auto _ : state) benchmark::DoNotOptimize(patch_z(1.0, g).value);
}
BENCHMARK(BM_PatchZ);

static void BM_SphereDE2(benchmark::State& state) {
  const auto k = kernel_casimir_scalar(Boundary::dirichlet);
  const auto p = make_sphere(1e-3, 1.0, 0.9);
  QuadratureSpec spec;
  spec.axisymmetric_reduction = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(eval_de2(k, p, spec).total());
}
BENCHMARK(BM_SphereDE2)->Arg(1)->Arg(0)->Unit(benchmark::kMicrosecond);

static void BM_GammaFit(benchmark::State& state) {
  const auto k = kernel_casimir_scalar(Boundary::neumann);
  GammaFitOptions o;
  for (auto _ : state) benchmark::DoNotOptimize(gamma_fit(k, o).gamma);
}
BENCHMARK(BM_GammaFit)->Unit(benchmark::kMillisecond);

static void BM_Jacobian(benchmark::State& state) {
  const auto p = make_gaussian_bump(1.0, 0.5, 1.0, 2.5);
  JacobianOptions o;
  o.prefer_level_sets = state.range(0) != 0;
  o.cells = 256;
  for (auto _ : state) benchmark::DoNotOptimize(compute_jacobian(p, o).J0);
}
BENCHMARK(BM_Jacobian)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
