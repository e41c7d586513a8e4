#include <benchmark/benchmark.h>

#include "saddlegkb/generators.hpp"
#include "saddlegkb/spd_factor.hpp"

using namespace saddlegkb;

namespace {

SparseSymMatrix grid_m(std::size_t ng) {
  const auto sys = gen_constrained_grid(ng);
  return add_outer_product(sys.W, 1.0, sys.A, one_norm(sys.W));
}

void BM_MinimumDegree(benchmark::State& state) {
  const auto m = grid_m(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(minimum_degree_ordering(m));
  state.counters["n"] = static_cast<double>(m.size());
}

void BM_Factor(benchmark::State& state) {
  const auto m = grid_m(static_cast<std::size_t>(state.range(0)));
  const auto ordering = state.range(1) ? Ordering::MinimumDegree : Ordering::Natural;
  std::size_t nnz = 0;
  for (auto _ : state) {
    const auto f = spd_factor(m, ordering);
    nnz = f.nnz();
    benchmark::DoNotOptimize(nnz);
  }
  state.counters["nnz_L"] = static_cast<double>(nnz);
}

void BM_FactorSolve(benchmark::State& state) {
  const auto m = grid_m(static_cast<std::size_t>(state.range(0)));
  const auto f = spd_factor(m);
  const Vector b(m.size(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(f.solve(b));
}

}  // namespace

BENCHMARK(BM_MinimumDegree)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Factor)->ArgsProduct({{16, 32, 48}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FactorSolve)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMicrosecond);
