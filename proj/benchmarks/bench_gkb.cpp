#include <benchmark/benchmark.h>

#include "saddlegkb/generators.hpp"
#include "saddlegkb/gkb.hpp"

using namespace saddlegkb;

namespace {

void BM_GkbSolveGrid(benchmark::State& state) {
  const auto sys = gen_constrained_grid(static_cast<std::size_t>(state.range(0)));
  const auto reg = regularize(sys, one_norm(sys.W));
  GkbConfig cfg;
  cfg.reorthogonalize = state.range(1) != 0;
  std::size_t iterations = 0;
  for (auto _ : state) {
    const auto res = gkb_solve(reg, cfg);
    iterations = res.iterations;
    benchmark::DoNotOptimize(res.u.data());
  }
  state.counters["iterations"] = static_cast<double>(iterations);
}

void BM_Regularize(benchmark::State& state) {
  const auto sys = gen_constrained_grid(static_cast<std::size_t>(state.range(0)));
  const double eta = one_norm(sys.W);
  for (auto _ : state) benchmark::DoNotOptimize(regularize(sys, eta).b().data());
}

void BM_GkbSolveSemidefinite(benchmark::State& state) {
  const auto sys = gen_semidefinite_coupled(static_cast<std::size_t>(state.range(0)), 16);
  const auto reg = regularize(sys, one_norm(sys.W));
  for (auto _ : state) benchmark::DoNotOptimize(gkb_solve(reg, GkbConfig{}).u.data());
}

}  // namespace

BENCHMARK(BM_GkbSolveGrid)->ArgsProduct({{16, 32, 48}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Regularize)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GkbSolveSemidefinite)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
