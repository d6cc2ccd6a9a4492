#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "lsalign/eval.hpp"
#include "lsalign/rng.hpp"

using namespace lsalign;
using doctest::Approx;

namespace {

PairList gold_of(std::initializer_list<std::pair<std::string, std::string>> pairs) {
  PairList out;
  out.pairs = pairs;
  return out;
}

}  // namespace

TEST_CASE("strict recall is exact pair matching") {
  const PairList gold = gold_of({{"s1", "t1"}, {"s2", "t2"}, {"s3", "t3"}, {"s4", "t4"}});
  CHECK(strict_recall(gold.pairs, gold) == Approx(1.0));
  CHECK(strict_recall({{"a", "b"}}, gold) == Approx(0.0));
  CHECK(strict_recall({{"s1", "t1"}, {"s2", "t2"}, {"s3", "nope"}, {"s4", "t4"}}, gold) ==
        Approx(0.75));
  // Swapped sides do not count.
  CHECK(strict_recall({{"t1", "s1"}}, gold) == Approx(0.0));
  CHECK_THROWS_AS(strict_recall({}, PairList{}), std::runtime_error);
}

TEST_CASE("soft_doc_similarity follows 2*lcss/(len1+len2) over tokens") {
  CHECK(soft_doc_similarity("a b c d", "a b c d") == Approx(1.0));
  CHECK(soft_doc_similarity("a b c d", "a b x d") == Approx(0.75));
  CHECK(soft_doc_similarity("a b", "x y") == Approx(0.0));
  CHECK(soft_doc_similarity("", "") == Approx(1.0));
  CHECK(soft_doc_similarity("a", "") == Approx(0.0));
  CHECK(soft_doc_similarity("", "a") == Approx(0.0));
  // Tokens are compared verbatim: no case folding, punctuation retained.
  CHECK(soft_doc_similarity("Hello", "hello") == Approx(0.0));
}

TEST_CASE("soft_doc_similarity is symmetric, bounded, 1 iff identical tokens") {
  rng::SplitMix gen(41);
  for (int iter = 0; iter < 300; ++iter) {
    const auto make = [&] {
      std::string s;
      const std::size_t n = gen.bounded(8);
      for (std::size_t i = 0; i < n; ++i) {
        if (i) s += ' ';
        s += static_cast<char>('a' + gen.bounded(3));
      }
      return s;
    };
    const std::string t1 = make(), t2 = make();
    const double s12 = soft_doc_similarity(t1, t2);
    CHECK(s12 == Approx(soft_doc_similarity(t2, t1)));
    CHECK(s12 >= 0.0);
    CHECK(s12 <= 1.0);
    const auto toks1 = tokenize_text(t1);
    const auto toks2 = tokenize_text(t2);
    const bool same = toks1.size() == toks2.size() &&
                      std::equal(toks1.begin(), toks1.end(), toks2.begin());
    CHECK((s12 == 1.0) == same);
  }
}

TEST_CASE("soft recall credits duplicate targets under different URLs") {
  const Corpus corpus(std::vector<Document>{
      {"d.com", "en", "s1", "one two three"},
      {"d.com", "fr", "t1", "un deux trois"},
      {"d.com", "fr", "t1dup", "un deux trois"},  // byte-identical duplicate
  });
  const PairList gold = gold_of({{"s1", "t1"}});
  const PredictedPairs predicted{{"s1", "t1dup"}};
  CHECK(strict_recall(predicted, gold) == Approx(0.0));
  CHECK(soft_recall(predicted, gold, corpus, 1.0) == Approx(1.0));
}

TEST_CASE("soft recall respects the threshold") {
  // 9 of 10 tokens shared: similarity 0.9.
  const Corpus corpus(std::vector<Document>{
      {"d.com", "en", "s1", "a b c d e f g h i j"},
      {"d.com", "fr", "t1", "q w e r t y u i o p"},
      {"d.com", "fr", "t2", "q w e r t y u i o X"},
  });
  const PairList gold = gold_of({{"s1", "t1"}});
  const PredictedPairs predicted{{"s1", "t2"}};
  CHECK(soft_doc_similarity(corpus.doc(1).text, corpus.doc(2).text) == Approx(0.9));
  CHECK(soft_recall(predicted, gold, corpus, 0.95) == Approx(0.0));
  CHECK(soft_recall(predicted, gold, corpus, 0.90) == Approx(1.0));  // >= is inclusive
}

TEST_CASE("soft recall also anchors on the target side") {
  const Corpus corpus(std::vector<Document>{
      {"d.com", "en", "s1", "one two three"},
      {"d.com", "en", "s1dup", "one two three"},
      {"d.com", "fr", "t1", "un deux trois"},
  });
  const PairList gold = gold_of({{"s1", "t1"}});
  const PredictedPairs predicted{{"s1dup", "t1"}};
  CHECK(soft_recall(predicted, gold, corpus, 1.0) == Approx(1.0));
}

TEST_CASE("exact predictions are perfect at every threshold") {
  const Corpus corpus(std::vector<Document>{
      {"d.com", "en", "s1", "alpha"},
      {"d.com", "fr", "t1", "beta"},
  });
  const PairList gold = gold_of({{"s1", "t1"}});
  for (double threshold : {1.0, 0.99, 0.95, 0.90}) {
    CHECK(soft_recall(gold.pairs, gold, corpus, threshold) == Approx(1.0));
  }
}

TEST_CASE("both-sides mode needs no URL anchor but both contents must pass") {
  const Corpus corpus(std::vector<Document>{
      {"d.com", "en", "s1", "one two three"},
      {"d.com", "en", "s1dup", "one two three"},
      {"d.com", "fr", "t1", "un deux trois"},
      {"d.com", "fr", "t1dup", "un deux trois"},
  });
  const PairList gold = gold_of({{"s1", "t1"}});
  const PredictedPairs predicted{{"s1dup", "t1dup"}};  // no shared URL with gold
  CHECK(soft_recall(predicted, gold, corpus, 1.0, SoftMatchSide::kEither) == Approx(0.0));
  CHECK(soft_recall(predicted, gold, corpus, 1.0, SoftMatchSide::kBoth) == Approx(1.0));
}

TEST_CASE("soft recall errors on unresolvable URLs") {
  const Corpus corpus(std::vector<Document>{{"d.com", "en", "s1", "x"},
                                            {"d.com", "fr", "t1", "y"}});
  const PairList gold = gold_of({{"s1", "ghost"}});
  CHECK_THROWS_WITH_AS(soft_recall({{"s1", "t1"}}, gold, corpus, 1.0),
                       doctest::Contains("ghost"), std::runtime_error);
}

TEST_CASE("soft recall is monotone as the threshold drops") {
  // A fixture with graded similarities.
  std::vector<Document> docs;
  PairList gold;
  PredictedPairs predicted;
  for (int i = 0; i < 10; ++i) {
    std::string src_text, tgt_text, proposed_text;
    for (int k = 0; k < 20; ++k) {
      src_text += "s" + std::to_string(k) + " ";
      tgt_text += "t" + std::to_string(k) + " ";
      // The proposed target shares 20-i of 20 tokens with the expected one.
      proposed_text += (k < 20 - i ? "t" : "x") + std::to_string(k) + " ";
    }
    const std::string tag = std::to_string(i);
    docs.push_back({"d.com", "en", "s" + tag, src_text});
    docs.push_back({"d.com", "fr", "t" + tag, tgt_text});
    docs.push_back({"d.com", "fr", "p" + tag, proposed_text});
    gold.pairs.emplace_back("s" + tag, "t" + tag);
    predicted.emplace_back("s" + tag, "p" + tag);
  }
  const Corpus corpus(docs);
  double prev = -1.0;
  for (double threshold : {0.90, 0.95, 0.99, 1.00}) {
    const double recall = soft_recall(predicted, gold, corpus, threshold);
    if (prev >= 0.0) CHECK(recall <= prev);
    prev = recall;
  }
}

TEST_CASE("miss report counts unrecovered gold pairs per domain") {
  std::vector<Document> docs;
  PairList gold;
  PredictedPairs predicted;
  // Domain heavy.com misses 3 pairs; light.com recovers its single pair.
  for (int i = 0; i < 3; ++i) {
    const std::string tag = std::to_string(i);
    docs.push_back({"heavy.com", "en", "hs" + tag, "alpha " + tag});
    docs.push_back({"heavy.com", "fr", "ht" + tag, "beta " + tag});
    gold.pairs.emplace_back("hs" + tag, "ht" + tag);
  }
  docs.push_back({"light.com", "en", "ls", "gamma"});
  docs.push_back({"light.com", "fr", "lt", "delta"});
  gold.pairs.emplace_back("ls", "lt");
  predicted.emplace_back("ls", "lt");
  const Corpus corpus(docs);

  const auto misses = miss_report(predicted, gold, corpus, 0.95);
  REQUIRE(misses.size() == 1);
  CHECK(misses.at("heavy.com") == 3);

  // Recovered + missed partitions the gold list.
  std::size_t missed = 0;
  for (const auto& [domain, count] : misses) missed += count;
  const double recall = soft_recall(predicted, gold, corpus, 0.95);
  CHECK(missed + static_cast<std::size_t>(recall * static_cast<double>(gold.size()) + 0.5) ==
        gold.size());

  SUBCASE("all recovered leaves the report empty") {
    CHECK(miss_report(gold.pairs, gold, corpus, 0.95).empty());
  }
}

TEST_CASE("report rendering aggregates single-miss domains under other") {
  EvalReport report;
  report.total_gold = 40;
  report.strict = 0.5;
  report.soft = {{1.00, 0.55}, {0.99, 0.60}, {0.95, 0.70}, {0.90, 0.80}};
  report.per_domain_misses = {{"big.com", 20}, {"mid.com", 2}, {"one.com", 1},
                              {"uno.org", 1}};
  report.miss_threshold = 0.95;

  std::ostringstream table;
  report.write_table(table);
  const std::string text = table.str();
  CHECK(text.find("big.com\t20") != std::string::npos);
  CHECK(text.find("mid.com\t2") != std::string::npos);
  CHECK(text.find("other\t2") != std::string::npos);
  CHECK(text.find("one.com") == std::string::npos);
  // Descending order: big.com before mid.com.
  CHECK(text.find("big.com") < text.find("mid.com"));

  std::ostringstream kv;
  report.write_kv(kv);
  CHECK(kv.str().find("strict\t0.500000") != std::string::npos);
  CHECK(kv.str().find("soft_1.00\t0.550000") != std::string::npos);
  CHECK(kv.str().find("soft_0.90\t0.800000") != std::string::npos);
  CHECK(kv.str().find("total_gold\t40") != std::string::npos);
  CHECK(kv.str().find("misses_big.com\t20") != std::string::npos);
}

TEST_CASE("evaluate bundles strict, soft and miss statistics") {
  const Corpus corpus(std::vector<Document>{
      {"d.com", "en", "s1", "one two"},
      {"d.com", "fr", "t1", "un deux"},
      {"d.com", "en", "s2", "three four"},
      {"d.com", "fr", "t2", "trois quatre"},
  });
  const PairList gold = gold_of({{"s1", "t1"}, {"s2", "t2"}});
  const PredictedPairs predicted{{"s1", "t1"}};
  const EvalReport report = evaluate(predicted, gold, corpus);
  CHECK(report.total_gold == 2);
  CHECK(report.strict == Approx(0.5));
  REQUIRE(report.soft.size() == 4);
  CHECK(report.soft[0].first == Approx(1.00));
  for (const auto& [threshold, recall] : report.soft) CHECK(recall == Approx(0.5));
  CHECK(report.per_domain_misses.at("d.com") == 1);
  // Soft recall at 1.00 never drops below strict.
  CHECK(report.soft[0].second >= report.strict);
}
