#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "lsalign/eval.hpp"
#include "lsalign/rng.hpp"
#include "lsalign/scoring.hpp"

using namespace lsalign;

namespace {

UrlTokens random_url_tokens(rng::SplitMix& gen, std::size_t n,
                            const std::vector<std::string>& pool) {
  UrlTokens u;
  for (std::size_t i = 0; i < n; ++i) u.tokens.push_back(pool[gen.bounded(pool.size())]);
  return u;
}

std::string random_text(rng::SplitMix& gen, std::size_t tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens; ++i) {
    if (i) out += ' ';
    out += "w" + std::to_string(gen.bounded(200));
  }
  return out;
}

}  // namespace

static void UrlSimilarity(benchmark::State& state) {
  rng::SplitMix gen(3);
  const std::vector<std::string> pool{"http", "www",  "site", "com",   "article",
                                      "2016", "05",   "42",   "story", "page"};
  UrlTokenCounts counts;
  for (const auto& t : pool) counts.counts[t] = 1 + gen.bounded(50);
  const auto n = static_cast<std::size_t>(state.range(0));
  const UrlTokens u1 = random_url_tokens(gen, n, pool);
  const UrlTokens u2 = random_url_tokens(gen, n, pool);
  for (auto _ : state) {
    benchmark::DoNotOptimize(url_similarity(u1, u2, counts));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(UrlSimilarity)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void SoftDocSimilarity(benchmark::State& state) {
  rng::SplitMix gen(5);
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::string t1 = random_text(gen, n);
  const std::string t2 = random_text(gen, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(soft_doc_similarity(t1, t2));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(SoftDocSimilarity)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void CosineScore(benchmark::State& state) {
  rng::SplitMix gen(7);
  Embedding a(1000), b(1000);
  for (int i = 0; i < 1000; ++i) {
    a[i] = gen.uniform() - 0.5;
    b[i] = gen.uniform() - 0.5;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(cosine(a, b));
  }
}
BENCHMARK(CosineScore);

BENCHMARK_MAIN();
