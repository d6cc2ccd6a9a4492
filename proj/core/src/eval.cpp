#include "lsalign/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "lsalign/scoring.hpp"

namespace lsalign {

namespace {

void require_gold(const PairList& gold) {
  if (gold.empty()) throw std::runtime_error("evaluation requires a non-empty gold pair list");
}

struct PredictionIndex {
  std::unordered_map<std::string, std::vector<std::size_t>> by_src;
  std::unordered_map<std::string, std::vector<std::size_t>> by_tgt;
  std::unordered_map<std::string, std::vector<std::size_t>> by_domain;
};

PredictionIndex index_predictions(const PredictedPairs& predicted, const Corpus& corpus) {
  PredictionIndex idx;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    idx.by_src[predicted[i].first].push_back(i);
    idx.by_tgt[predicted[i].second].push_back(i);
    if (const auto id = corpus.find_url(predicted[i].first)) {
      idx.by_domain[corpus.doc(*id).domain].push_back(i);
    }
  }
  return idx;
}

/// True if the gold pair (src, tgt) is recovered by some prediction at the
/// threshold.
bool recovered(const std::pair<std::string, std::string>& gold_pair,
               const PredictionIndex& idx, const PredictedPairs& predicted,
               const Corpus& corpus, double threshold, SoftMatchSide side) {
  const auto& [gold_src, gold_tgt] = gold_pair;
  const Document& src_doc = corpus.doc(corpus.require_url(gold_src));
  const Document& tgt_doc = corpus.doc(corpus.require_url(gold_tgt));

  if (side == SoftMatchSide::kBoth) {
    // Content match on both sides; URLs need not coincide. Candidate
    // predictions are limited to the gold pair's domain.
    const auto it = idx.by_domain.find(src_doc.domain);
    if (it == idx.by_domain.end()) return false;
    for (std::size_t i : it->second) {
      const auto& [p_src, p_tgt] = predicted[i];
      const auto ps = corpus.find_url(p_src);
      const auto pt = corpus.find_url(p_tgt);
      if (!ps || !pt) continue;
      if (soft_doc_similarity(corpus.doc(*ps).text, src_doc.text) >= threshold &&
          soft_doc_similarity(corpus.doc(*pt).text, tgt_doc.text) >= threshold) {
        return true;
      }
    }
    return false;
  }

  // Either side: a prediction shares one URL exactly and the proposed
  // document on the other side is content-similar to the expected one.
  if (const auto it = idx.by_src.find(gold_src); it != idx.by_src.end()) {
    for (std::size_t i : it->second) {
      const auto proposed = corpus.find_url(predicted[i].second);
      if (!proposed) continue;
      if (soft_doc_similarity(corpus.doc(*proposed).text, tgt_doc.text) >= threshold) {
        return true;
      }
    }
  }
  if (const auto it = idx.by_tgt.find(gold_tgt); it != idx.by_tgt.end()) {
    for (std::size_t i : it->second) {
      const auto proposed = corpus.find_url(predicted[i].first);
      if (!proposed) continue;
      if (soft_doc_similarity(corpus.doc(*proposed).text, src_doc.text) >= threshold) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

double strict_recall(const PredictedPairs& predicted, const PairList& gold) {
  require_gold(gold);
  std::set<std::pair<std::string, std::string>> predicted_set(predicted.begin(),
                                                              predicted.end());
  std::size_t hits = 0;
  for (const auto& pair : gold.pairs) {
    if (predicted_set.contains(pair)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

double soft_doc_similarity(std::string_view text1, std::string_view text2) {
  const std::vector<std::string_view> a = tokenize_text(text1);
  const std::vector<std::string_view> b = tokenize_text(text2);
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  return 2.0 * static_cast<double>(lcss_len(a, b)) /
         static_cast<double>(a.size() + b.size());
}

double soft_recall(const PredictedPairs& predicted, const PairList& gold,
                   const Corpus& corpus, double threshold, SoftMatchSide side) {
  require_gold(gold);
  const PredictionIndex idx = index_predictions(predicted, corpus);
  std::size_t hits = 0;
  for (const auto& pair : gold.pairs) {
    if (recovered(pair, idx, predicted, corpus, threshold, side)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

std::map<std::string, std::size_t> miss_report(const PredictedPairs& predicted,
                                               const PairList& gold, const Corpus& corpus,
                                               double threshold, SoftMatchSide side) {
  require_gold(gold);
  const PredictionIndex idx = index_predictions(predicted, corpus);
  std::map<std::string, std::size_t> misses;
  for (const auto& pair : gold.pairs) {
    if (!recovered(pair, idx, predicted, corpus, threshold, side)) {
      ++misses[corpus.doc(corpus.require_url(pair.first)).domain];
    }
  }
  return misses;
}

EvalReport evaluate(const PredictedPairs& predicted, const PairList& gold,
                    const Corpus& corpus, const EvalOptions& options) {
  require_gold(gold);
  EvalReport report;
  report.total_gold = gold.size();
  report.strict = strict_recall(predicted, gold);
  for (double threshold : options.thresholds) {
    report.soft.emplace_back(threshold,
                             soft_recall(predicted, gold, corpus, threshold, options.side));
  }
  report.miss_threshold = options.miss_threshold;
  report.per_domain_misses =
      miss_report(predicted, gold, corpus, options.miss_threshold, options.side);
  return report;
}

void EvalReport::write_table(std::ostream& out) const {
  char buf[32];
  out << "recall over " << total_gold << " gold pairs\n";
  out << "  strict";
  for (const auto& [threshold, recall] : soft) {
    std::snprintf(buf, sizeof(buf), "%9.2f", threshold);
    out << buf;
  }
  out << '\n';
  std::snprintf(buf, sizeof(buf), "%8.4f", strict);
  out << buf;
  for (const auto& [threshold, recall] : soft) {
    std::snprintf(buf, sizeof(buf), "%9.4f", recall);
    out << buf;
  }
  out << '\n';

  if (per_domain_misses.empty()) return;
  std::snprintf(buf, sizeof(buf), "%.2f", miss_threshold);
  out << "\nmissed pairs per domain (soft threshold " << buf << ")\n";
  // Descending count; domains with a single miss aggregate under "other".
  std::vector<std::pair<std::string, std::size_t>> rows(per_domain_misses.begin(),
                                                        per_domain_misses.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::size_t single = 0;
  for (const auto& [domain, count] : rows) {
    if (count == 1) {
      ++single;
    } else {
      out << "  " << domain << '\t' << count << '\n';
    }
  }
  if (single > 0) out << "  other\t" << single << '\n';
}

void EvalReport::write_kv(std::ostream& out) const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", strict);
  out << "strict\t" << buf << '\n';
  for (const auto& [threshold, recall] : soft) {
    char key[32];
    std::snprintf(key, sizeof(key), "%.2f", threshold);
    std::snprintf(buf, sizeof(buf), "%.6f", recall);
    out << "soft_" << key << '\t' << buf << '\n';
  }
  out << "total_gold\t" << total_gold << '\n';
  for (const auto& [domain, count] : per_domain_misses) {
    out << "misses_" << domain << '\t' << count << '\n';
  }
}

}  // namespace lsalign
