#include "lsalign/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"

namespace lsalign {

namespace {

struct LoadedInputs {
  Corpus corpus;
  Vocabulary vocab;
  IdfTable idf;
};

LoadedInputs load_inputs(const PipelineConfig& config) {
  LoadedInputs in;
  in.corpus = Corpus::load(config.docs_path);
  validate_languages(in.corpus, config.src_lang, config.tgt_lang);
  in.vocab = Vocabulary::build(in.corpus);
  in.idf = IdfTable::build(in.corpus, config.idf_scope);
  return in;
}

LsiModel train_model(const LoadedInputs& in, const PairList& pairs,
                     const PipelineConfig& config, bool log_spectrum) {
  const TermDocMatrix matrix = build_term_doc_matrix(in.corpus, pairs, in.vocab, in.idf);
  if (!config.matrix_dump_path.empty()) {
    std::ofstream dump(config.matrix_dump_path, std::ios::binary);
    if (!dump) {
      throw std::runtime_error("cannot write matrix dump '" + config.matrix_dump_path + "'");
    }
    matrix.dump(dump);
  }
  TrainResult trained = train_lsi(
      matrix, SvdOptions{config.rank, config.seed, config.oversample, config.power_iters});
  trained.model.vocab_fingerprint = in.vocab.fingerprint();
  if (log_spectrum) {
    std::ostringstream head;
    const auto k = std::min<Eigen::Index>(5, trained.model.singular_values.size());
    for (Eigen::Index i = 0; i < k; ++i) {
      if (i > 0) head << ' ';
      head << trained.model.singular_values[i];
    }
    std::cerr << "matrix: " << matrix.rows << " x " << matrix.cols.size() << ", "
              << matrix.nnz() << " nonzeros; spectrum head: " << head.str() << '\n';
  }
  return trained.model;
}

struct AlignOutput {
  std::vector<AlignmentHypothesis> linked;
  std::vector<AlignmentHypothesis> all;  // every scored hypothesis, pre-linking
};

/// Scores and links the given domains; results are merged in domain name
/// order, then globally ranked.
AlignOutput align_domains(const LoadedInputs& in, const LsiModel& model,
                          const std::vector<std::string>& domains,
                          const PipelineConfig& config) {
  const std::vector<Embedding> embeddings =
      embed_corpus(in.corpus, model, in.vocab, in.idf, config.scaling, config.workers);
  const DomainUrlStats url_stats = DomainUrlStats::build(in.corpus, config.url_scope);
  std::vector<AlignOutput> per_domain(domains.size());
  detail::parallel_for(domains.size(), config.workers, [&](std::size_t i) {
    std::vector<AlignmentHypothesis> hyps =
        generate_hypotheses(domains[i], in.corpus, embeddings, url_stats, config.weights,
                            config.src_lang, config.tgt_lang);
    combine_scores(hyps, config.weights);
    per_domain[i].linked = competitive_link(hyps, in.corpus);
    per_domain[i].all = std::move(hyps);
  });
  AlignOutput merged;
  for (AlignOutput& part : per_domain) {
    merged.linked.insert(merged.linked.end(), part.linked.begin(), part.linked.end());
    merged.all.insert(merged.all.end(), part.all.begin(), part.all.end());
  }
  return merged;
}

PredictedPairs to_pairs(const std::vector<AlignmentHypothesis>& hyps, const Corpus& corpus) {
  PredictedPairs out;
  out.reserve(hyps.size());
  for (const AlignmentHypothesis& h : hyps) {
    out.emplace_back(corpus.doc(h.src).url, corpus.doc(h.tgt).url);
  }
  return out;
}

void write_alignment(const std::string& path, std::vector<AlignmentHypothesis> hyps,
                     const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write alignment file '" + path + "'");
  emit_ranked_list(out, std::move(hyps), corpus);
  if (!out) throw std::runtime_error("I/O error writing '" + path + "'");
}

/// Domains containing gold pairs, in sorted order. Pair domains are read off
/// the source documents; a pair spanning two domains is rejected.
std::vector<std::string> gold_domains(const Corpus& corpus, const PairList& gold) {
  std::set<std::string> domains;
  for (const auto& [src_url, tgt_url] : gold.pairs) {
    const Document& src = corpus.doc(corpus.require_url(src_url));
    const Document& tgt = corpus.doc(corpus.require_url(tgt_url));
    if (src.domain != tgt.domain) {
      throw std::runtime_error("gold pair spans two domains: '" + src_url + "' / '" +
                               tgt_url + "'");
    }
    domains.insert(src.domain);
  }
  return {domains.begin(), domains.end()};
}

PairList filter_pairs(const Corpus& corpus, const PairList& pairs,
                      const std::set<std::string>& excluded_domains) {
  PairList out;
  for (const auto& pair : pairs.pairs) {
    const Document& src = corpus.doc(corpus.require_url(pair.first));
    if (!excluded_domains.contains(src.domain)) out.pairs.push_back(pair);
  }
  return out;
}

/// Training-matrix hygiene for the exclusion regimes: no column may come
/// from an excluded domain.
void check_exclusion(const Corpus& corpus, const PairList& training,
                     const std::set<std::string>& excluded_domains) {
  for (const auto& [src_url, tgt_url] : training.pairs) {
    const Document& src = corpus.doc(corpus.require_url(src_url));
    if (excluded_domains.contains(src.domain)) {
      throw std::logic_error("excluded domain '" + src.domain +
                             "' leaked into the training pairs");
    }
  }
}

EvalReport finish_evaluation(const PredictedPairs& predicted, const PairList& gold,
                             const Corpus& corpus, const PipelineConfig& config) {
  EvalOptions options;
  options.thresholds = config.thresholds;
  options.side = config.soft_side;
  const EvalReport report = evaluate(predicted, gold, corpus, options);
  report.write_table(std::cout);
  if (!config.out_path.empty()) {
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report file '" + config.out_path + "'");
    report.write_kv(out);
  }
  return report;
}

}  // namespace

void PipelineConfig::validate() const {
  if (rank < 1) throw std::runtime_error("rank must be >= 1");
  if (src_lang == tgt_lang || src_lang.empty() || tgt_lang.empty()) {
    throw std::runtime_error("source and target languages must be distinct and non-empty");
  }
  for (double t : thresholds) {
    if (t <= 0.0 || t > 1.0) {
      throw std::runtime_error("soft thresholds must lie in (0, 1]");
    }
  }
  weights.validate();
}

void run_train(const PipelineConfig& config) {
  config.validate();
  const LoadedInputs in = load_inputs(config);
  const PairList pairs = PairList::load(config.train_pairs_path);
  const LsiModel model = train_model(in, pairs, config, /*log_spectrum=*/true);
  model.save(config.model_path);
}

PredictedPairs run_align(const PipelineConfig& config) {
  config.validate();
  const LoadedInputs in = load_inputs(config);
  const LsiModel model = LsiModel::load(config.model_path);
  AlignOutput output = align_domains(in, model, in.corpus.domains(), config);
  if (!config.ranked_path.empty()) {
    write_alignment(config.ranked_path, std::move(output.all), in.corpus);
  }
  PredictedPairs pairs = to_pairs(output.linked, in.corpus);
  write_alignment(config.alignment_path, std::move(output.linked), in.corpus);
  return pairs;
}

EvalReport run_evaluate(const PipelineConfig& config) {
  config.validate();
  const Corpus corpus = Corpus::load(config.docs_path);
  const PairList gold = PairList::load(config.gold_pairs_path);
  const PredictedPairs predicted = load_alignment(config.alignment_path);
  return finish_evaluation(predicted, gold, corpus, config);
}

EvalReport run_loo(const PipelineConfig& config) {
  config.validate();
  const LoadedInputs in = load_inputs(config);
  const PairList train_pairs = PairList::load(config.train_pairs_path);
  const PairList gold = PairList::load(config.gold_pairs_path);

  const std::vector<std::string> eval_domains = gold_domains(in.corpus, gold);
  if (eval_domains.size() < 2) {
    throw std::runtime_error("exclusion regimes need gold pairs spanning at least 2 domains");
  }

  std::vector<AlignmentHypothesis> merged;
  if (config.exclusion == ExclusionMode::kLeaveOneOut) {
    std::vector<std::vector<AlignmentHypothesis>> per_domain(eval_domains.size());
    detail::parallel_for(eval_domains.size(), config.workers, [&](std::size_t i) {
      const std::string& domain = eval_domains[i];
      const std::set<std::string> excluded{domain};
      const PairList training = filter_pairs(in.corpus, train_pairs, excluded);
      if (training.empty()) {
        throw std::runtime_error("no training pairs remain when excluding '" + domain + "'");
      }
      check_exclusion(in.corpus, training, excluded);
      // One preformatted write so lines from worker threads stay intact.
      std::ostringstream line;
      line << "loo " << domain << ": " << training.size() << " training pairs ("
           << train_pairs.size() - training.size() << " excluded)\n";
      std::cerr << line.str();
      PipelineConfig local = config;
      local.workers = 1;  // parallelism is spent on the domain loop
      const LsiModel model = train_model(in, training, local, /*log_spectrum=*/false);
      per_domain[i] = align_domains(in, model, {domain}, local).linked;
    });
    for (std::vector<AlignmentHypothesis>& part : per_domain) {
      merged.insert(merged.end(), part.begin(), part.end());
    }
  } else {
    PairList training = train_pairs;
    if (config.exclusion == ExclusionMode::kHeldout) {
      const std::set<std::string> excluded(eval_domains.begin(), eval_domains.end());
      training = filter_pairs(in.corpus, train_pairs, excluded);
      if (training.empty()) {
        throw std::runtime_error(
            "heldout regime: no training pairs outside the evaluation domains");
      }
      check_exclusion(in.corpus, training, excluded);
      std::cerr << "heldout: " << training.size() << " training pairs ("
                << train_pairs.size() - training.size() << " excluded)\n";
    }
    const LsiModel model = train_model(in, training, config, /*log_spectrum=*/false);
    merged = align_domains(in, model, eval_domains, config).linked;
  }

  const PredictedPairs predicted = to_pairs(merged, in.corpus);
  if (!config.alignment_path.empty()) {
    write_alignment(config.alignment_path, std::move(merged), in.corpus);
  }
  return finish_evaluation(predicted, gold, in.corpus, config);
}

}  // namespace lsalign
