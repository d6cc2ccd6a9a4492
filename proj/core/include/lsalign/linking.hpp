#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsalign/corpus.hpp"
#include "lsalign/lsi.hpp"
#include "lsalign/scoring.hpp"

namespace lsalign {

/// Per-scorer raw values for one candidate pair. cos/lcos are nullopt when
/// the scorer is disabled or an operand embedding is zero; url is nullopt
/// only when disabled.
struct ScoreTriple {
  std::optional<double> cos;
  std::optional<double> lcos;
  std::optional<double> url;
};

/// How the enabled scorers are combined into one ranking score.
struct WeightConfig {
  double cos = 1.0;
  double lcos = 1.0;
  double url = 1.0;

  enum class Norm {
    kMinMax,  // per-domain min-max to [0,1] before the weighted mean
    kNone,    // weighted mean of raw values (ablation mode)
  };
  Norm norm = Norm::kMinMax;

  /// 0 keeps exact all-pairs generation; k > 0 keeps only each source's k
  /// best candidates by cosine.
  std::uint32_t top_k = 0;

  bool cos_enabled() const { return cos > 0.0; }
  bool lcos_enabled() const { return lcos > 0.0; }
  bool url_enabled() const { return url > 0.0; }

  /// Throws unless all weights are >= 0 and at least one is positive.
  void validate() const;
};

/// One candidate (source doc, target doc) pair within a domain.
struct AlignmentHypothesis {
  DocId src = 0;
  DocId tgt = 0;
  ScoreTriple scores;
  double combined = 0.0;
};

/// All cross-lingual pairs within one domain, each scored with every enabled
/// scorer. Returns an empty list when either language side is empty.
std::vector<AlignmentHypothesis> generate_hypotheses(
    std::string_view domain, const Corpus& corpus,
    const std::vector<Embedding>& embeddings, const DomainUrlStats& url_stats,
    const WeightConfig& config, std::string_view src_lang, std::string_view tgt_lang);

/// Fills in each hypothesis's combined score: every enabled scorer is
/// min-max normalized over the hypothesis set (undefined cosines count as
/// the scorer's minimum; a constant scorer maps to 0.5), then combined as
/// the weighted mean. Norm::kNone skips normalization.
void combine_scores(std::vector<AlignmentHypothesis>& hypotheses,
                    const WeightConfig& config);

/// Stable ranking order: descending combined score, ties broken by
/// (src url, tgt url).
void sort_ranked(std::vector<AlignmentHypothesis>& hypotheses, const Corpus& corpus);

/// Competitive linking: scan in ranked order, keep a hypothesis iff neither
/// of its documents appears in an already kept one. The result is a 1:1
/// partial matching in kept order.
std::vector<AlignmentHypothesis> competitive_link(std::vector<AlignmentHypothesis> hypotheses,
                                                  const Corpus& corpus);

/// Writes "combined\tsrc_url\ttgt_url" lines in descending combined order,
/// scores with 6 decimal places.
void emit_ranked_list(std::ostream& out, std::vector<AlignmentHypothesis> hypotheses,
                      const Corpus& corpus);

/// Reads an alignment file back as (src_url, tgt_url) pairs in file order.
std::vector<std::pair<std::string, std::string>> load_alignment(const std::string& path);

}  // namespace lsalign
