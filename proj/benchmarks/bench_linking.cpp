#include <benchmark/benchmark.h>

#include <vector>

#include "lsalign/linking.hpp"
#include "lsalign/rng.hpp"

using namespace lsalign;

namespace {

Corpus grid_corpus(std::size_t n) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < n; ++i) {
    docs.push_back({"d.com", "en", "http://d.com/en/" + std::to_string(i), ""});
  }
  for (std::size_t j = 0; j < n; ++j) {
    docs.push_back({"d.com", "fr", "http://d.com/fr/" + std::to_string(j), ""});
  }
  return Corpus(docs);
}

std::vector<AlignmentHypothesis> random_hypotheses(std::size_t n, std::uint64_t seed) {
  rng::SplitMix gen(seed);
  std::vector<AlignmentHypothesis> hyps;
  hyps.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      AlignmentHypothesis h;
      h.src = static_cast<DocId>(i);
      h.tgt = static_cast<DocId>(n + j);
      h.scores.cos = gen.uniform() * 2 - 1;
      h.scores.url = gen.uniform() * 4;
      hyps.push_back(h);
    }
  }
  return hyps;
}

}  // namespace

static void CombineAndLink(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Corpus corpus = grid_corpus(n);
  const std::vector<AlignmentHypothesis> hyps = random_hypotheses(n, 11);
  WeightConfig weights;
  weights.lcos = 0.0;
  for (auto _ : state) {
    std::vector<AlignmentHypothesis> work = hyps;
    combine_scores(work, weights);
    benchmark::DoNotOptimize(competitive_link(std::move(work), corpus));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(CombineAndLink)->RangeMultiplier(2)->Range(8, 256)->Complexity()
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
