#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lsalign/corpus.hpp"

namespace lsalign {

using PredictedPairs = std::vector<std::pair<std::string, std::string>>;

/// How soft matching credits a prediction against a gold pair.
enum class SoftMatchSide {
  kEither,  // one URL matches exactly, the other side passes the threshold
  kBoth,    // both sides pass the threshold by content (no URL anchor)
};

/// Fraction of gold pairs present in the predictions as exact URL-string
/// pairs. Throws on an empty gold list.
double strict_recall(const PredictedPairs& predicted, const PairList& gold);

/// Content similarity 2*lcss/(len1+len2) over whitespace tokens, exactly as
/// the texts occur (no folding). 1.0 when both token sequences are empty,
/// 0.0 when exactly one is.
double soft_doc_similarity(std::string_view text1, std::string_view text2);

/// Recall under content-based matching at one threshold.
double soft_recall(const PredictedPairs& predicted, const PairList& gold,
                   const Corpus& corpus, double threshold,
                   SoftMatchSide side = SoftMatchSide::kEither);

/// Gold pairs not recovered at the threshold, counted per domain.
std::map<std::string, std::size_t> miss_report(const PredictedPairs& predicted,
                                               const PairList& gold, const Corpus& corpus,
                                               double threshold,
                                               SoftMatchSide side = SoftMatchSide::kEither);

struct EvalOptions {
  std::vector<double> thresholds{1.00, 0.99, 0.95, 0.90};
  SoftMatchSide side = SoftMatchSide::kEither;
  double miss_threshold = 0.95;
};

struct EvalReport {
  double strict = 0.0;
  std::vector<std::pair<double, double>> soft;  // (threshold, recall), config order
  std::map<std::string, std::size_t> per_domain_misses;
  double miss_threshold = 0.95;
  std::size_t total_gold = 0;

  /// Table with one column per threshold next to strict recall, then the
  /// per-domain miss distribution in descending count order (domains with a
  /// single miss aggregate under "other").
  void write_table(std::ostream& out) const;

  /// One "name\tvalue" metric per line.
  void write_kv(std::ostream& out) const;
};

EvalReport evaluate(const PredictedPairs& predicted, const PairList& gold,
                    const Corpus& corpus, const EvalOptions& options = {});

}  // namespace lsalign
