// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "cpmv/codegen.hpp"
#include "cpmv/peeling.hpp"
#include "cpmv/planner.hpp"
#include "cpmv/rs_baseline.hpp"
#include "cpmv/runtime.hpp"

namespace {

using namespace cpmv;

void BM_SparseMatvec(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto b = static_cast<std::size_t>(state.range(1));
  const auto a = gen_banded(n, b, 1);
  const auto x = gen_vector(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sparse_matvec(a, x));
  state.counters["nnz"] = static_cast<double>(a.nnz());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}
BENCHMARK(BM_SparseMatvec)->Args({2400, 60})->Args({2400, 123})->Args({2400, 392});

void BM_ComputeZ(benchmark::State& state) {
  const CodeParams params{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(compute_z(params));
}
BENCHMARK(BM_ComputeZ)->Args({7, 4})->Args({12, 8})->Args({12, 4});

void BM_PeelingDecode(benchmark::State& state) {
  const CodeParams params{7, 4};
  const int delta = static_cast<int>(state.range(0));
  const std::size_t len = 50;
  const auto plan = build_plan(params, delta);
  const auto shape = GridShape::for_plan(plan);
  const std::vector<int> erased = {1, 3, 5};
  const auto filler = gen_vector(len, 2);
  for (auto _ : state) {
    state.PauseTiming();
    SymbolGrid<double> grid(shape, len);
    for (int j = 0; j < params.n; ++j) {
      if (j == 1 || j == 3 || j == 5) continue;
      for (int r = shape.row_begin(j); r < shape.row_end(j); ++r) grid.set_known(r, j, filler);
    }
    state.ResumeTiming();
    benchmark::DoNotOptimize(decode(grid, StragglerSet(erased, params.n)));
  }
}
BENCHMARK(BM_PeelingDecode)->Arg(40)->Arg(160);

void BM_RsDecode(benchmark::State& state) {
  const int delta = static_cast<int>(state.range(0));
  const auto cfg = RSConfig::equally_spaced(7, delta, (delta + 3) / 4);
  const std::size_t len = 800 / static_cast<std::size_t>(delta);
  std::vector<RSResponse> responses;
  for (int i = 0; i < delta; ++i) responses.push_back({cfg.points[static_cast<std::size_t>(2 * i % cfg.points.size())], gen_vector(len, static_cast<std::uint64_t>(i))});
  for (auto _ : state) benchmark::DoNotOptimize(rs_decode(responses, cfg));
}
BENCHMARK(BM_RsDecode)->Arg(5)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
