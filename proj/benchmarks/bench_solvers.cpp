#include <benchmark/benchmark.h>

#include <cmath>

#include "ancient/exact.hpp"
#include "ancient/flow1d.hpp"
#include "ancient/flow2d.hpp"

using namespace ancient;

namespace {

flow1d::RadialState rosenau_1d(int n) {
  const grid::PsiGrid g(n);
  return {g, exact::AncientSolution::rosenau(1.0).sample_v(g, -1.0), -1.0};
}

flow2d::SphereState2D perturbed_2d(int n, int m) {
  const grid::PsiGrid pg(n);
  const grid::ThetaGrid tg(m);
  const auto v = exact::AncientSolution::rosenau(1.0).sample_v(pg, -1.0);
  grid::Field2D f(n, m);
  for (int j = 0; j < n; ++j) {
    const double c = std::cos(pg.node(j));
    for (int k = 0; k < m; ++k) f(j, k) = v[j] * (1 + 0.05 * std::cos(tg.node(k)) * c * c);
  }
  return {pg, tg, f, -1.0};
}

void BM_rhs(benchmark::State& state) {
  const auto s = rosenau_1d(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(flow1d::rhs(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_rhs)->RangeMultiplier(2)->Range(64, 1024);

void BM_step(benchmark::State& state) {
  auto s = rosenau_1d(static_cast<int>(state.range(0)));
  const double dt = flow1d::cfl_dt(s, {});
  for (auto _ : state) benchmark::DoNotOptimize(flow1d::step(s, dt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_step)->RangeMultiplier(2)->Range(64, 1024);

void BM_rhs2d(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto s = perturbed_2d(n, n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(flow2d::rhs2d(s));
  state.SetItemsProcessed(state.iterations() * n * (n / 2));
}
BENCHMARK(BM_rhs2d)->Arg(64)->Arg(128)->Arg(256);

void BM_step2d(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto s = perturbed_2d(n, n / 2);
  const double dt = flow2d::cfl_dt2d(s, {});
  for (auto _ : state) benchmark::DoNotOptimize(flow2d::step2d(s, dt));
  state.SetItemsProcessed(state.iterations() * n * (n / 2));
}
BENCHMARK(BM_step2d)->Arg(64)->Arg(128);

void BM_polar_filter(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  auto s = perturbed_2d(n, n / 2);
  const flow2d::PolarFilter filter(s.psi_grid, s.theta_grid);
  for (auto _ : state) {
    filter.apply(s.v);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n * (n / 2));
}
BENCHMARK(BM_polar_filter)->Arg(64)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
