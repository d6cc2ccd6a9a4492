#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lsalign/eval.hpp"
#include "lsalign/linking.hpp"
#include "lsalign/lsi.hpp"
#include "lsalign/scoring.hpp"
#include "lsalign/vectorizer.hpp"

namespace lsalign {

enum class ExclusionMode {
  kNone,        // seed the model with every known pair (included regime)
  kHeldout,     // one model trained without any evaluation-domain pairs
  kLeaveOneOut, // per evaluation domain, a model without that domain's pairs
};

/// Everything a pipeline run needs. Paths that a given command does not use
/// may stay empty.
struct PipelineConfig {
  std::string docs_path;
  std::string train_pairs_path;
  std::string gold_pairs_path;
  std::string model_path;
  std::string alignment_path;  // align/loo output, evaluate input
  std::string out_path;        // evaluate/loo report (key-value format)
  std::string ranked_path;     // optional: full ranked hypothesis list (align)
  std::string matrix_dump_path;  // optional: term-document matrix dump (train)

  std::uint32_t rank = 1000;
  std::uint64_t seed = 0;
  std::uint32_t oversample = 20;
  std::uint32_t power_iters = 2;

  WeightConfig weights;
  EmbeddingScaling scaling = EmbeddingScaling::kSingularValues;
  IdfScope idf_scope = IdfScope::kPerDomain;
  UrlCountScope url_scope = UrlCountScope::kPerDomain;

  std::vector<double> thresholds{1.00, 0.99, 0.95, 0.90};
  SoftMatchSide soft_side = SoftMatchSide::kEither;
  ExclusionMode exclusion = ExclusionMode::kNone;

  std::string src_lang = "en";
  std::string tgt_lang = "fr";
  std::size_t workers = 1;

  void validate() const;
};

/// Builds vocabulary, idf tables and the bilingual matrix from the training
/// pairs, trains the model and writes it to model_path. Logs the matrix
/// shape and the head of the spectrum.
void run_train(const PipelineConfig& config);

/// Embeds the corpus with an existing model, scores and links every domain,
/// and writes the alignment file. Returns the linked pairs.
PredictedPairs run_align(const PipelineConfig& config);

/// Evaluates an alignment file against gold pairs; writes the key-value
/// report to out_path (when set) and the table to stdout.
EvalReport run_evaluate(const PipelineConfig& config);

/// Included/heldout/leave-one-domain-out regimes over the gold domains:
/// trains the regime's model(s), aligns each evaluation domain, aggregates
/// the predictions, and evaluates them. Writes the alignment file and
/// report when paths are set.
EvalReport run_loo(const PipelineConfig& config);

}  // namespace lsalign
