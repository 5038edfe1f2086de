// Microbenchmarks for the hot paths: polar quadrature, relaxation sweeps,
// the scaled energy, the shooting oracle, and blow-up rescaling. Shared
// fixtures are built once so the timed loops measure only the operation.

#include <benchmark/benchmark.h>

#include <cmath>

#include "logobs/blowup.hpp"
#include "logobs/field.hpp"
#include "logobs/oracle1d.hpp"
#include "logobs/quadrature.hpp"
#include "logobs/solver.hpp"
#include "logobs/weiss.hpp"

using namespace logobs;

namespace {

const ScalarField& planar_field() {
  static const ScalarField f = [] {
    OracleSolution1D sol = shoot(1e-3, 0.33, ForcingMode::Logarithmic);
    Grid g = grid_2d(-0.32, -0.32, 1.0 / 400.0, 257, 257);
    return field_from(g, [&](const Vec2& p) {
      return p[0] <= 0.0 ? 0.0 : interpolate(sol, p[0]).u;
    });
  }();
  return f;
}

void BM_ball_integral(benchmark::State& state) {
  const ScalarField& u = planar_field();
  QuadratureConfig quad;
  quad.interp_order = int(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ball_integral(u, {0.0, 0.0}, 0.2, quad));
}
BENCHMARK(BM_ball_integral)->Arg(1)->Arg(3);

void BM_sphere_integral(benchmark::State& state) {
  const ScalarField& u = planar_field();
  QuadratureConfig quad;
  quad.interp_order = int(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(sphere_integral(u, {0.0, 0.0}, 0.2, quad));
}
BENCHMARK(BM_sphere_integral)->Arg(1)->Arg(3);

void BM_weiss_energy(benchmark::State& state) {
  const ScalarField& u = planar_field();
  WeissConfig cfg;
  cfg.quadrature.interp_order = 3;
  for (auto _ : state)
    benchmark::DoNotOptimize(weiss_energy(u, {0.0, 0.0}, 0.2, cfg));
}
BENCHMARK(BM_weiss_energy);

void BM_rescale(benchmark::State& state) {
  const ScalarField& u = planar_field();
  for (auto _ : state)
    benchmark::DoNotOptimize(rescale(u, {0.0, 0.0}, 0.1, 3));
}
BENCHMARK(BM_rescale);

void BM_oracle_shoot(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(shoot(1e-3, 0.5, ForcingMode::Logarithmic));
}
BENCHMARK(BM_oracle_shoot);

// Full staged solve on a modest grid; grid edge doubles with the range
// argument so the scaling with node count is visible in one report.
void BM_solve(benchmark::State& state) {
  int n = int(state.range(0));
  OracleSolution1D sol = shoot(1e-3, 0.2, ForcingMode::Logarithmic);
  Grid g = grid_2d(-0.15, -0.15, 0.3 / (n - 1), n, n);
  ProblemSpec spec =
      make_problem(g, ForcingMode::Logarithmic, [&](const Vec2& p) {
        return p[0] <= 0.0 ? 0.0 : interpolate(sol, p[0]).u;
      });
  spec.relax_omega = 1.9;
  for (auto _ : state) benchmark::DoNotOptimize(solve(spec));
}
BENCHMARK(BM_solve)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
