// lsalign: align web pages across two languages with cross-lingual LSI,
// domain-centered cosine scoring, URL similarity and competitive linking.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "lsalign/pipeline.hpp"
#include "lsalign/synth.hpp"

namespace {

using lsalign::PipelineConfig;

/// Expands "--config <file>" in place. The file is flat key=value text with
/// '#' comments; each key names a long flag of the current subcommand and is
/// injected as "--key value" unless the same flag already appears on the
/// command line, so explicit flags always win.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::size_t config_at = 0;
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_at = i;
      path = args[i + 1];
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_at = i;
      path = args[i].substr(9);
      break;
    }
  }
  if (path.empty()) return args;

  std::set<std::string> explicit_keys;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i].rfind("--", 0) != 0) continue;
    const std::string body = args[i].substr(2);
    explicit_keys.insert(body.substr(0, body.find('=')));
  }

  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  std::vector<std::string> injected;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw CLI::ValidationError(path + ":" + std::to_string(line_no),
                                 "expected key=value");
    }
    const std::string key = line.substr(0, eq);
    if (key == "config" || explicit_keys.contains(key)) continue;
    injected.push_back("--" + key);
    injected.push_back(line.substr(eq + 1));
  }

  // Replace the two --config tokens with the injected flags.
  const std::size_t drop = args[config_at] == "--config" ? 2 : 1;
  args.erase(args.begin() + static_cast<std::ptrdiff_t>(config_at),
             args.begin() + static_cast<std::ptrdiff_t>(config_at + drop));
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(config_at),
              injected.begin(), injected.end());
  return args;
}

struct FlagState {
  std::vector<double> weights{1.0, 1.0, 1.0};
  std::string normalize = "minmax";
  std::string exclusion;
  std::string idf_scope = "domain";
  std::string url_counts = "domain";
  std::string embed_scaling = "singular-values";
  std::string soft_match = "either";
};

void apply_flags(PipelineConfig& config, const FlagState& flags) {
  if (flags.weights.size() != 3) {
    throw CLI::ValidationError("--weights", "expected cos,lcos,url (3 comma-separated values)");
  }
  config.weights.cos = flags.weights[0];
  config.weights.lcos = flags.weights[1];
  config.weights.url = flags.weights[2];
  config.weights.norm = flags.normalize == "none" ? lsalign::WeightConfig::Norm::kNone
                                                  : lsalign::WeightConfig::Norm::kMinMax;
  config.idf_scope = flags.idf_scope == "global" ? lsalign::IdfScope::kGlobal
                                                 : lsalign::IdfScope::kPerDomain;
  config.url_scope = flags.url_counts == "global" ? lsalign::UrlCountScope::kGlobal
                                                  : lsalign::UrlCountScope::kPerDomain;
  config.scaling = flags.embed_scaling == "none" ? lsalign::EmbeddingScaling::kNone
                                                 : lsalign::EmbeddingScaling::kSingularValues;
  config.soft_side = flags.soft_match == "both" ? lsalign::SoftMatchSide::kBoth
                                                : lsalign::SoftMatchSide::kEither;
  if (flags.exclusion == "none" || flags.exclusion.empty()) {
    config.exclusion = lsalign::ExclusionMode::kNone;
  } else if (flags.exclusion == "heldout") {
    config.exclusion = lsalign::ExclusionMode::kHeldout;
  } else {
    config.exclusion = lsalign::ExclusionMode::kLeaveOneOut;
  }
}

void add_language_flags(CLI::App* cmd, PipelineConfig& config) {
  cmd->add_option("--src-lang", config.src_lang, "Source language label")
      ->capture_default_str();
  cmd->add_option("--tgt-lang", config.tgt_lang, "Target language label")
      ->capture_default_str();
}

void add_model_flags(CLI::App* cmd, PipelineConfig& config) {
  cmd->add_option("--rank", config.rank, "Dimensions of the joint semantic space")
      ->capture_default_str();
  cmd->add_option("--seed", config.seed, "Seed for the randomized SVD")
      ->capture_default_str();
  cmd->add_option("--oversample", config.oversample, "Sketch oversampling columns")
      ->capture_default_str();
  cmd->add_option("--power-iters", config.power_iters, "Subspace power iterations")
      ->capture_default_str();
}

void add_scoring_flags(CLI::App* cmd, PipelineConfig& config, FlagState& flags) {
  cmd->add_option("--weights", flags.weights,
                  "Scorer weights as cos,lcos,url (nonnegative reals)")
      ->delimiter(',')
      ->expected(1, 3);
  cmd->add_option("--normalize", flags.normalize, "Score normalization before combining")
      ->check(CLI::IsMember({"minmax", "none"}))
      ->capture_default_str();
  cmd->add_option("--top-k", config.weights.top_k,
                  "Per source, keep only the k best targets by cosine (0 = exact)")
      ->capture_default_str();
  cmd->add_option("--embed-scaling", flags.embed_scaling,
                  "Embedding scaling before cosine scoring")
      ->check(CLI::IsMember({"singular-values", "none"}))
      ->capture_default_str();
  cmd->add_option("--idf-scope", flags.idf_scope, "Idf statistics scope")
      ->check(CLI::IsMember({"domain", "global"}))
      ->capture_default_str();
  cmd->add_option("--url-counts", flags.url_counts, "URL token count scope")
      ->check(CLI::IsMember({"domain", "global"}))
      ->capture_default_str();
}

void add_eval_flags(CLI::App* cmd, PipelineConfig& config, FlagState& flags) {
  cmd->add_option("--thresholds", config.thresholds,
                  "Soft recall thresholds (comma list in (0,1])")
      ->delimiter(',');
  cmd->add_option("--soft-match", flags.soft_match, "Soft matching rule")
      ->check(CLI::IsMember({"either", "both"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilingual web page alignment via cross-lingual latent semantic indexing"};
  app.require_subcommand(1);

  PipelineConfig config;
  FlagState flags;
  lsalign::SynthConfig synth;
  std::string config_file;  // consumed by expand_config_args, shown in --help

  auto* train = app.add_subcommand("train", "Build the bilingual matrix and train an LSI model");
  train->add_option("--docs", config.docs_path, "Documents TSV")->required();
  train->add_option("--train-pairs", config.train_pairs_path, "Known pairs TSV")->required();
  train->add_option("--model", config.model_path, "Model output file")->required();
  train->add_option("--dump-matrix", config.matrix_dump_path,
                    "Also dump the term-document matrix as text triples");
  add_model_flags(train, config);
  add_language_flags(train, config);
  train->add_option("--idf-scope", flags.idf_scope, "Idf statistics scope")
      ->check(CLI::IsMember({"domain", "global"}))
      ->capture_default_str();

  auto* align = app.add_subcommand("align", "Embed, score and link all domains");
  align->add_option("--docs", config.docs_path, "Documents TSV")->required();
  align->add_option("--model", config.model_path, "Trained model file")->required();
  align->add_option("--out", config.alignment_path, "Alignment output TSV")->required();
  align->add_option("--ranked-out", config.ranked_path,
                    "Also write the full ranked hypothesis list (before linking)");
  add_scoring_flags(align, config, flags);
  add_language_flags(align, config);
  align->add_option("--workers", config.workers, "Worker threads")->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "Score an alignment against gold pairs");
  evaluate->add_option("--docs", config.docs_path, "Documents TSV")->required();
  evaluate->add_option("--gold-pairs", config.gold_pairs_path, "Gold pairs TSV")->required();
  evaluate->add_option("--alignment", config.alignment_path, "Alignment TSV to evaluate")
      ->required();
  evaluate->add_option("--out", config.out_path, "Key-value report output");
  add_eval_flags(evaluate, config, flags);
  add_language_flags(evaluate, config);

  auto* loo = app.add_subcommand(
      "loo", "Included/heldout/leave-one-domain-out regimes with retraining");
  loo->add_option("--docs", config.docs_path, "Documents TSV")->required();
  loo->add_option("--train-pairs", config.train_pairs_path, "Known pairs TSV")->required();
  loo->add_option("--gold-pairs", config.gold_pairs_path, "Gold pairs TSV")->required();
  loo->add_option("--out", config.out_path, "Key-value report output");
  loo->add_option("--alignment", config.alignment_path, "Aggregated alignment output");
  flags.exclusion = "loo";
  loo->add_option("--exclusion", flags.exclusion, "Training regime")
      ->check(CLI::IsMember({"none", "heldout", "loo"}))
      ->capture_default_str();
  add_model_flags(loo, config);
  add_scoring_flags(loo, config, flags);
  add_eval_flags(loo, config, flags);
  add_language_flags(loo, config);
  loo->add_option("--workers", config.workers, "Worker threads")->capture_default_str();

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic docs/pairs fixture");
  synth_cmd->add_option("--out", synth.out_prefix, "Output path prefix")->required();
  synth_cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--domains", synth.domains, "Number of web domains")
      ->capture_default_str();
  synth_cmd->add_option("--docs-per-lang", synth.docs_per_lang,
                        "Paired pages per language per domain")
      ->capture_default_str();
  synth_cmd->add_option("--vocab-size", synth.vocab_size, "Dictionary entries per language")
      ->capture_default_str();
  synth_cmd->add_option("--payload-len", synth.payload_len, "Tokens per page")
      ->capture_default_str();
  synth_cmd->add_option("--boilerplate", synth.boilerplate_frac,
                        "Fraction of each page that is site boilerplate")
      ->capture_default_str();
  synth_cmd->add_option("--boilerplate-tokens", synth.boilerplate_tokens,
                        "Distinct boilerplate tokens per domain")
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "Per-token corruption rate on the target side")
      ->capture_default_str();
  synth_cmd->add_option("--dups", synth.duplicates,
                        "Target pages cloned under a second URL")
      ->capture_default_str();
  synth_cmd->add_option("--distractors", synth.distractors,
                        "Unpaired extra pages per language per domain")
      ->capture_default_str();
  synth_cmd->add_option("--src-lang", synth.src_lang, "Source language label")
      ->capture_default_str();
  synth_cmd->add_option("--tgt-lang", synth.tgt_lang, "Target language label")
      ->capture_default_str();

  for (CLI::App* cmd : {train, align, evaluate, loo, synth_cmd}) {
    cmd->add_option("--config", config_file,
                    "Flat key=value file; any flag of this subcommand, command "
                    "line takes precedence");
  }

  try {
    std::vector<std::string> args = expand_config_args(argc, argv);
    // CLI11's vector overload wants the arguments reversed, program name dropped.
    app.parse(std::vector<std::string>(args.rbegin(), args.rend() - 1));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (train->parsed()) {
      apply_flags(config, flags);
      lsalign::run_train(config);
    } else if (align->parsed()) {
      apply_flags(config, flags);
      lsalign::run_align(config);
    } else if (evaluate->parsed()) {
      apply_flags(config, flags);
      lsalign::run_evaluate(config);
    } else if (loo->parsed()) {
      apply_flags(config, flags);
      lsalign::run_loo(config);
    } else if (synth_cmd->parsed()) {
      const lsalign::SynthOutput out = lsalign::generate_synthetic(synth);
      std::cout << out.docs_path << '\n' << out.pairs_path << '\n'
                << out.manifest_path << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
