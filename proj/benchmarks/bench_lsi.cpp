#include <benchmark/benchmark.h>

#include "lsalign/lsi.hpp"
#include "lsalign/rng.hpp"

using namespace lsalign;

namespace {

TermDocMatrix random_matrix(std::size_t rows, std::size_t cols, double density,
                            std::uint64_t seed) {
  rng::SplitMix gen(seed);
  TermDocMatrix m;
  m.rows = rows;
  for (std::size_t c = 0; c < cols; ++c) {
    SparseVector col;
    col.dim = rows;
    for (std::size_t r = 0; r < rows; ++r) {
      if (gen.uniform() < density) {
        col.entries.emplace_back(static_cast<std::uint32_t>(r), 0.25 + gen.uniform());
      }
    }
    if (col.empty()) col.entries.emplace_back(0, 1.0);
    m.cols.push_back(col);
    m.col_pairs.emplace_back("s", "t");
  }
  return m;
}

}  // namespace

static void TrainLsi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TermDocMatrix m = random_matrix(n * 4, n, 0.05, 17);
  const SvdOptions options{32, 1, 20, 2};
  for (auto _ : state) {
    TrainResult trained = train_lsi(m, options);
    benchmark::DoNotOptimize(trained.model.singular_values);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(TrainLsi)->RangeMultiplier(2)->Range(64, 1024)->Complexity()
    ->Unit(benchmark::kMillisecond);

static void FoldIn(benchmark::State& state) {
  const TermDocMatrix m = random_matrix(4096, 256, 0.05, 23);
  const TrainResult trained = train_lsi(m, SvdOptions{32, 1, 20, 2});
  const SparseVector& q = m.cols[7];
  for (auto _ : state) {
    Embedding e = fold_in(q, trained.model);
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(FoldIn);

BENCHMARK_MAIN();
