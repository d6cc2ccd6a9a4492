#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "lsalign/pipeline.hpp"
#include "lsalign/synth.hpp"
#include "test_util.hpp"

using namespace lsalign;
using doctest::Approx;

namespace {

/// Small synthetic workspace shared by the pipeline tests.
struct Workspace {
  testutil::TempDir tmp{"pipeline"};
  SynthOutput files;

  explicit Workspace(std::uint64_t seed = 5, std::size_t domains = 3,
                     std::size_t docs_per_lang = 4, std::size_t dups = 0) {
    SynthConfig synth;
    synth.seed = seed;
    synth.domains = domains;
    synth.docs_per_lang = docs_per_lang;
    synth.vocab_size = 90;
    synth.payload_len = 30;
    synth.noise = 0.05;
    synth.duplicates = dups;
    synth.out_prefix = tmp.file("fix");
    files = generate_synthetic(synth);
  }

  PipelineConfig config() const {
    PipelineConfig cfg;
    cfg.docs_path = files.docs_path;
    cfg.train_pairs_path = files.pairs_path;
    cfg.gold_pairs_path = files.pairs_path;
    cfg.model_path = tmp.file("model.bin");
    cfg.alignment_path = tmp.file("alignment.tsv");
    cfg.out_path = tmp.file("report.tsv");
    cfg.rank = 4;
    cfg.seed = 9;
    cfg.oversample = 10;
    return cfg;
  }
};

}  // namespace

TEST_CASE("config validation") {
  PipelineConfig cfg;
  cfg.rank = 0;
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
  cfg.rank = 2;
  cfg.tgt_lang = cfg.src_lang;
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
  cfg.tgt_lang = "fr";
  cfg.thresholds = {1.5};
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
  cfg.thresholds = {0.9};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("train writes a deterministic model of the requested rank") {
  const Workspace ws;
  PipelineConfig cfg = ws.config();
  run_train(cfg);
  const LsiModel model = LsiModel::load(cfg.model_path);
  CHECK(model.rank() == 4);

  PipelineConfig again = ws.config();
  again.model_path = ws.tmp.file("model2.bin");
  run_train(again);
  CHECK(testutil::read_file(cfg.model_path) == testutil::read_file(again.model_path));
}

TEST_CASE("train rejects a rank beyond min(m, n)") {
  const Workspace ws;
  PipelineConfig cfg = ws.config();
  cfg.rank = 100000;
  CHECK_THROWS_WITH_AS(run_train(cfg), doctest::Contains("rank"), std::runtime_error);
}

TEST_CASE("align links the planted pairs and is byte-deterministic") {
  const Workspace ws;
  PipelineConfig cfg = ws.config();
  run_train(cfg);
  const PredictedPairs first = run_align(cfg);
  const std::string bytes = testutil::read_file(cfg.alignment_path);

  PipelineConfig again = ws.config();
  again.alignment_path = ws.tmp.file("alignment2.tsv");
  const PredictedPairs second = run_align(again);
  CHECK(first == second);
  CHECK(bytes == testutil::read_file(again.alignment_path));

  // The fixture is easy: everything should be recovered.
  const Corpus corpus = Corpus::load(cfg.docs_path);
  const PairList gold = PairList::load(cfg.gold_pairs_path);
  CHECK(strict_recall(first, gold) == Approx(1.0));
}

TEST_CASE("align with a url-only weighting reduces to url similarity ranking") {
  const Workspace ws;
  PipelineConfig cfg = ws.config();
  run_train(cfg);
  cfg.weights.cos = 0.0;
  cfg.weights.lcos = 0.0;
  const PredictedPairs via_pipeline = run_align(cfg);

  // Manual route: score every in-domain pair with url_similarity alone.
  const Corpus corpus = Corpus::load(cfg.docs_path);
  const DomainUrlStats stats = DomainUrlStats::build(corpus);
  PredictedPairs manual;
  for (const auto& [domain, ids] : corpus.by_domain()) {
    std::vector<AlignmentHypothesis> hyps;
    for (DocId s : ids) {
      if (corpus.doc(s).lang != cfg.src_lang) continue;
      for (DocId t : ids) {
        if (corpus.doc(t).lang != cfg.tgt_lang) continue;
        AlignmentHypothesis h;
        h.src = s;
        h.tgt = t;
        h.combined = url_similarity(tokenize_url(corpus.doc(s).url),
                                    tokenize_url(corpus.doc(t).url),
                                    stats.for_domain(domain));
        hyps.push_back(h);
      }
    }
    for (const auto& h : competitive_link(hyps, corpus)) {
      manual.emplace_back(corpus.doc(h.src).url, corpus.doc(h.tgt).url);
    }
  }
  CHECK(std::set(via_pipeline.begin(), via_pipeline.end()) ==
        std::set(manual.begin(), manual.end()));
}

TEST_CASE("align catches a model trained on a different vocabulary") {
  const Workspace ws;
  PipelineConfig cfg = ws.config();
  run_train(cfg);

  const Workspace other(1234);
  PipelineConfig wrong = ws.config();
  wrong.docs_path = other.files.docs_path;
  CHECK_THROWS_WITH_AS(run_align(wrong), doctest::Contains("fingerprint"),
                       std::runtime_error);
}

TEST_CASE("evaluate reads the alignment file and reports both formats") {
  const Workspace ws;
  PipelineConfig cfg = ws.config();
  run_train(cfg);
  run_align(cfg);
  const EvalReport report = run_evaluate(cfg);
  CHECK(report.strict == Approx(1.0));
  REQUIRE(report.soft.size() == 4);
  CHECK(report.soft[0].first == Approx(1.00));
  CHECK(report.soft[3].first == Approx(0.90));
  double prev = report.strict;
  for (const auto& [threshold, recall] : report.soft) {
    CHECK(recall >= prev - 1e-12);  // non-decreasing left to right
    prev = recall;
  }
  const std::string kv = testutil::read_file(cfg.out_path);
  CHECK(kv.find("strict\t1.000000") != std::string::npos);
  CHECK(kv.find("soft_0.95\t") != std::string::npos);
}

TEST_CASE("workers do not change alignment bytes") {
  const Workspace ws;
  PipelineConfig cfg = ws.config();
  run_train(cfg);
  run_align(cfg);
  const std::string sequential = testutil::read_file(cfg.alignment_path);
  PipelineConfig parallel = ws.config();
  parallel.workers = 4;
  parallel.alignment_path = ws.tmp.file("alignment_mt.tsv");
  run_align(parallel);
  CHECK(sequential == testutil::read_file(parallel.alignment_path));
}

TEST_CASE("loo regimes") {
  const Workspace ws(7, 4, 4);
  PipelineConfig cfg = ws.config();

  SUBCASE("leave-one-domain-out excludes only the evaluated domain") {
    cfg.exclusion = ExclusionMode::kLeaveOneOut;
    const EvalReport report = run_loo(cfg);
    CHECK(report.total_gold == 16);
    CHECK(report.strict >= 0.0);
    const PredictedPairs predicted = load_alignment(cfg.alignment_path);
    // One prediction per gold source (easy fixture, all domains aligned).
    CHECK(predicted.size() == 16);
  }

  SUBCASE("heldout requires training data outside the gold domains") {
    cfg.exclusion = ExclusionMode::kHeldout;
    // Gold over every domain leaves nothing to train on.
    CHECK_THROWS_WITH_AS(run_loo(cfg), doctest::Contains("heldout"), std::runtime_error);
  }

  SUBCASE("heldout with a proper split works and differs from included") {
    // Gold = first two domains only.
    const Corpus corpus = Corpus::load(cfg.docs_path);
    const PairList all = PairList::load(cfg.train_pairs_path);
    PairList gold;
    const auto domains = corpus.domains();
    const std::set<std::string> gold_domains{domains[0], domains[1]};
    for (const auto& pair : all.pairs) {
      const Document& src = corpus.doc(corpus.require_url(pair.first));
      if (gold_domains.contains(src.domain)) gold.pairs.push_back(pair);
    }
    const std::string gold_path = ws.tmp.file("gold_subset.tsv");
    gold.save(gold_path);
    cfg.gold_pairs_path = gold_path;

    cfg.exclusion = ExclusionMode::kHeldout;
    const EvalReport heldout = run_loo(cfg);
    cfg.exclusion = ExclusionMode::kNone;
    const EvalReport included = run_loo(cfg);
    CHECK(heldout.total_gold == 8);
    CHECK(included.total_gold == 8);
    CHECK(heldout.strict <= included.strict + 1e-12);
  }
}

TEST_CASE("loo rejects single-domain gold") {
  const Workspace ws(7, 2, 3);
  PipelineConfig cfg = ws.config();
  const Corpus corpus = Corpus::load(cfg.docs_path);
  const PairList all = PairList::load(cfg.train_pairs_path);
  PairList gold;
  const std::string first_domain = corpus.domains()[0];
  for (const auto& pair : all.pairs) {
    if (corpus.doc(corpus.require_url(pair.first)).domain == first_domain) {
      gold.pairs.push_back(pair);
    }
  }
  const std::string gold_path = ws.tmp.file("gold_one.tsv");
  gold.save(gold_path);
  cfg.gold_pairs_path = gold_path;
  cfg.exclusion = ExclusionMode::kLeaveOneOut;
  CHECK_THROWS_WITH_AS(run_loo(cfg), doctest::Contains("2 domains"), std::runtime_error);
}

TEST_CASE("synthetic corpora are deterministic") {
  testutil::TempDir tmp("synth");
  SynthConfig synth;
  synth.seed = 77;
  synth.domains = 2;
  synth.docs_per_lang = 3;
  synth.vocab_size = 50;
  synth.payload_len = 20;
  synth.duplicates = 1;
  synth.distractors = 1;
  synth.out_prefix = tmp.file("a");
  const SynthOutput a = generate_synthetic(synth);
  synth.out_prefix = tmp.file("b");
  const SynthOutput b = generate_synthetic(synth);
  CHECK(testutil::read_file(a.docs_path) == testutil::read_file(b.docs_path));
  CHECK(testutil::read_file(a.pairs_path) == testutil::read_file(b.pairs_path));
}

TEST_CASE("synthetic target pages are dictionary images when noise is zero") {
  testutil::TempDir tmp("synth");
  SynthConfig synth;
  synth.seed = 3;
  synth.domains = 2;
  synth.docs_per_lang = 3;
  synth.vocab_size = 40;
  synth.payload_len = 15;
  synth.noise = 0.0;
  synth.out_prefix = tmp.file("clean");
  const SynthOutput out = generate_synthetic(synth);

  const Corpus corpus = Corpus::load(out.docs_path);
  const PairList pairs = PairList::load(out.pairs_path);
  REQUIRE(pairs.size() == 6);
  for (const auto& [src_url, tgt_url] : pairs.pairs) {
    const Document& src = corpus.doc(corpus.require_url(src_url));
    const Document& tgt = corpus.doc(corpus.require_url(tgt_url));
    const auto src_tokens = tokenize_text(src.text);
    const auto tgt_tokens = tokenize_text(tgt.text);
    REQUIRE(src_tokens.size() == tgt_tokens.size());
    for (std::size_t i = 0; i < src_tokens.size(); ++i) {
      // e<id> maps to f<id>, token by token.
      CHECK(src_tokens[i].substr(0, 1) == "e");
      CHECK(tgt_tokens[i].substr(0, 1) == "f");
      CHECK(src_tokens[i].substr(1) == tgt_tokens[i].substr(1));
    }
  }
}

TEST_CASE("synthetic duplicates are exact copies under sort-first URLs") {
  testutil::TempDir tmp("synth");
  SynthConfig synth;
  synth.seed = 13;
  synth.domains = 2;
  synth.docs_per_lang = 3;
  synth.vocab_size = 40;
  synth.payload_len = 15;
  synth.duplicates = 2;
  synth.out_prefix = tmp.file("dup");
  const SynthOutput out = generate_synthetic(synth);

  const Corpus corpus = Corpus::load(out.docs_path);
  const std::string manifest = testutil::read_file(out.manifest_path);
  std::size_t dup_lines = 0;
  std::istringstream lines(manifest);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("duplicate\t", 0) != 0) continue;
    ++dup_lines;
    std::istringstream fields(line);
    std::string tag, dup_url, orig_url;
    std::getline(fields, tag, '\t');
    std::getline(fields, dup_url, '\t');
    std::getline(fields, orig_url, '\t');
    const Document& dup = corpus.doc(corpus.require_url(dup_url));
    const Document& orig = corpus.doc(corpus.require_url(orig_url));
    CHECK(dup.text == orig.text);
    CHECK(dup.url != orig.url);
    CHECK(dup.url < orig.url);
    CHECK(dup.domain == orig.domain);
  }
  CHECK(dup_lines == 2);
}

TEST_CASE("align can emit the full ranked hypothesis list") {
  const Workspace ws;
  PipelineConfig cfg = ws.config();
  run_train(cfg);
  cfg.ranked_path = ws.tmp.file("ranked.tsv");
  run_align(cfg);

  const auto ranked = load_alignment(cfg.ranked_path);
  const auto linked = load_alignment(cfg.alignment_path);
  // 3 domains x (4 sources x 4 targets) hypotheses, 4 links per domain.
  CHECK(ranked.size() == 48);
  CHECK(linked.size() == 12);
  // Scores are non-increasing down the ranked file.
  std::istringstream lines(testutil::read_file(cfg.ranked_path));
  std::string line;
  double prev = 2.0;
  while (std::getline(lines, line)) {
    const double score = std::stod(line.substr(0, line.find('\t')));
    CHECK(score <= prev + 1e-12);
    prev = score;
  }
}

TEST_CASE("train can dump the term-document matrix") {
  const Workspace ws;
  PipelineConfig cfg = ws.config();
  cfg.matrix_dump_path = ws.tmp.file("matrix.txt");
  run_train(cfg);
  std::istringstream dump(testutil::read_file(cfg.matrix_dump_path));
  std::size_t m = 0, n = 0, nnz = 0;
  dump >> m >> n >> nnz;
  CHECK(m > 0);
  CHECK(n == 12);  // one column per training pair
  CHECK(nnz > 0);
  std::size_t triples = 0;
  std::uint32_t row, col;
  double value;
  while (dump >> row >> col >> value) {
    CHECK(row < m);
    CHECK(col < n);
    CHECK(value > 0.0);
    ++triples;
  }
  CHECK(triples == nnz);
}

TEST_CASE("synthetic boilerplate fraction shapes the pages") {
  testutil::TempDir tmp("synth");
  SynthConfig synth;
  synth.seed = 21;
  synth.domains = 2;
  synth.docs_per_lang = 4;
  synth.vocab_size = 100;
  synth.payload_len = 40;
  synth.boilerplate_frac = 0.9;
  synth.boilerplate_tokens = 6;
  synth.out_prefix = tmp.file("boiler");
  const SynthOutput out = generate_synthetic(synth);

  const Corpus corpus = Corpus::load(out.docs_path);
  for (const auto& [domain, ids] : corpus.by_domain()) {
    // Within a domain, source pages share at least 90% of their tokens.
    const Document& first = corpus.doc(ids[0]);
    for (DocId id : ids) {
      const Document& doc = corpus.doc(id);
      if (doc.lang != first.lang) continue;
      CHECK(soft_doc_similarity(first.text, doc.text) >= 0.9);
    }
  }
}
