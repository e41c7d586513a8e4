#include <benchmark/benchmark.h>

#include "saddlegkb/generators.hpp"
#include "saddlegkb/sparse.hpp"

using namespace saddlegkb;

namespace {

void BM_SymMatVec(benchmark::State& state) {
  const auto sys = gen_constrained_grid(static_cast<std::size_t>(state.range(0)));
  const Vector x(sys.m(), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(mat_vec(sys.W, x).data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sys.W.nnz()));
}

void BM_TransposeMatVec(benchmark::State& state) {
  const auto sys = gen_random(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)) / 4,
                              1, 1e3);
  const Vector y(sys.m(), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(transpose_mat_vec(sys.A, y).data());
}

void BM_AddOuterProduct(benchmark::State& state) {
  const auto sys = gen_constrained_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(add_outer_product(sys.W, 1.0, sys.A, 2.0).nnz());
}

}  // namespace

BENCHMARK(BM_SymMatVec)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_TransposeMatVec)->Arg(400)->Arg(1600);
BENCHMARK(BM_AddOuterProduct)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
