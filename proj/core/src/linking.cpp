#include "lsalign/linking.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace lsalign {

void WeightConfig::validate() const {
  if (cos < 0.0 || lcos < 0.0 || url < 0.0) {
    throw std::runtime_error("scorer weights must be nonnegative");
  }
  if (cos == 0.0 && lcos == 0.0 && url == 0.0) {
    throw std::runtime_error("at least one scorer must have a positive weight");
  }
}

std::vector<AlignmentHypothesis> generate_hypotheses(
    std::string_view domain, const Corpus& corpus,
    const std::vector<Embedding>& embeddings, const DomainUrlStats& url_stats,
    const WeightConfig& config, std::string_view src_lang, std::string_view tgt_lang) {
  config.validate();
  const auto dom_it = corpus.by_domain().find(std::string(domain));
  if (dom_it == corpus.by_domain().end()) return {};
  const std::vector<DocId>& members = dom_it->second;

  std::vector<DocId> sources, targets;
  for (DocId id : members) {
    const std::string& lang = corpus.doc(id).lang;
    if (lang == src_lang) sources.push_back(id);
    else if (lang == tgt_lang) targets.push_back(id);
  }
  if (sources.empty() || targets.empty()) return {};

  const bool need_embeddings = config.cos_enabled() || config.lcos_enabled() ||
                               config.top_k > 0;
  if (need_embeddings && embeddings.size() != corpus.size()) {
    throw std::runtime_error("embeddings do not cover the corpus");
  }

  // The domain mean is taken over all embedded pages of the domain, both
  // languages, before any candidate restriction.
  Embedding mean;
  if (config.lcos_enabled()) {
    std::vector<Embedding> domain_embeddings;
    domain_embeddings.reserve(members.size());
    for (DocId id : members) domain_embeddings.push_back(embeddings[id]);
    mean = domain_mean(domain_embeddings);
  }

  const UrlTokenCounts* counts = nullptr;
  std::vector<UrlTokens> src_urls, tgt_urls;
  if (config.url_enabled()) {
    counts = &url_stats.for_domain(domain);
    src_urls.reserve(sources.size());
    tgt_urls.reserve(targets.size());
    for (DocId id : sources) src_urls.push_back(tokenize_url(corpus.doc(id).url));
    for (DocId id : targets) tgt_urls.push_back(tokenize_url(corpus.doc(id).url));
  }

  // Optional candidate pruning: keep each source's top-k targets by cosine.
  std::vector<std::vector<std::size_t>> kept_targets(sources.size());
  if (config.top_k > 0 && config.top_k < targets.size()) {
    for (std::size_t si = 0; si < sources.size(); ++si) {
      std::vector<std::pair<double, std::size_t>> ranked;
      ranked.reserve(targets.size());
      for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const auto c = cosine(embeddings[sources[si]], embeddings[targets[ti]]);
        ranked.emplace_back(c.value_or(-std::numeric_limits<double>::infinity()), ti);
      }
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      ranked.resize(config.top_k);
      for (const auto& [score, ti] : ranked) kept_targets[si].push_back(ti);
      std::sort(kept_targets[si].begin(), kept_targets[si].end());
    }
  } else {
    for (std::size_t si = 0; si < sources.size(); ++si) {
      kept_targets[si].resize(targets.size());
      for (std::size_t ti = 0; ti < targets.size(); ++ti) kept_targets[si][ti] = ti;
    }
  }

  std::vector<AlignmentHypothesis> hypotheses;
  for (std::size_t si = 0; si < sources.size(); ++si) {
    for (std::size_t ti : kept_targets[si]) {
      AlignmentHypothesis h;
      h.src = sources[si];
      h.tgt = targets[ti];
      if (config.cos_enabled()) {
        h.scores.cos = cosine(embeddings[h.src], embeddings[h.tgt]);
      }
      if (config.lcos_enabled()) {
        h.scores.lcos = local_cosine(embeddings[h.src], embeddings[h.tgt], mean);
      }
      if (config.url_enabled()) {
        h.scores.url = url_similarity(src_urls[si], tgt_urls[ti], *counts);
      }
      hypotheses.push_back(std::move(h));
    }
  }
  return hypotheses;
}

namespace {

/// Min-max normalizes one scorer's values across the hypothesis set.
/// Undefined entries (zero embeddings) take the scorer's observed minimum;
/// a constant (or fully undefined) scorer maps everything to 0.5.
std::vector<double> normalize_column(const std::vector<std::optional<double>>& raw) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& v : raw) {
    if (!v) continue;
    lo = std::min(lo, *v);
    hi = std::max(hi, *v);
  }
  std::vector<double> out(raw.size());
  if (lo > hi || lo == hi) {
    std::fill(out.begin(), out.end(), 0.5);
    return out;
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = raw[i] ? *raw[i] : lo;
    out[i] = (v - lo) / (hi - lo);
  }
  return out;
}

/// Raw combination still needs a stand-in for undefined cosines: the
/// scorer's observed minimum (0 when nothing is defined).
std::vector<double> raw_column(const std::vector<std::optional<double>>& raw) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& v : raw) {
    if (v) lo = std::min(lo, *v);
  }
  if (lo == std::numeric_limits<double>::infinity()) lo = 0.0;
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] ? *raw[i] : lo;
  return out;
}

}  // namespace

void combine_scores(std::vector<AlignmentHypothesis>& hypotheses,
                    const WeightConfig& config) {
  config.validate();
  if (hypotheses.empty()) return;

  struct Column {
    double weight;
    std::vector<std::optional<double>> raw;
  };
  std::vector<Column> columns;
  const auto add_column = [&](double weight, auto getter) {
    if (weight <= 0.0) return;
    Column col;
    col.weight = weight;
    col.raw.reserve(hypotheses.size());
    for (const AlignmentHypothesis& h : hypotheses) col.raw.push_back(getter(h));
    columns.push_back(std::move(col));
  };
  add_column(config.cos, [](const AlignmentHypothesis& h) { return h.scores.cos; });
  add_column(config.lcos, [](const AlignmentHypothesis& h) { return h.scores.lcos; });
  add_column(config.url, [](const AlignmentHypothesis& h) { return h.scores.url; });

  double total_weight = 0.0;
  for (const Column& col : columns) total_weight += col.weight;

  std::vector<double> combined(hypotheses.size(), 0.0);
  for (const Column& col : columns) {
    const std::vector<double> values = config.norm == WeightConfig::Norm::kMinMax
                                           ? normalize_column(col.raw)
                                           : raw_column(col.raw);
    for (std::size_t i = 0; i < values.size(); ++i) {
      combined[i] += col.weight * values[i];
    }
  }
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    hypotheses[i].combined = combined[i] / total_weight;
  }
}

void sort_ranked(std::vector<AlignmentHypothesis>& hypotheses, const Corpus& corpus) {
  std::sort(hypotheses.begin(), hypotheses.end(),
            [&corpus](const AlignmentHypothesis& a, const AlignmentHypothesis& b) {
              if (a.combined != b.combined) return a.combined > b.combined;
              const std::string& asrc = corpus.doc(a.src).url;
              const std::string& bsrc = corpus.doc(b.src).url;
              if (asrc != bsrc) return asrc < bsrc;
              return corpus.doc(a.tgt).url < corpus.doc(b.tgt).url;
            });
}

std::vector<AlignmentHypothesis> competitive_link(std::vector<AlignmentHypothesis> hypotheses,
                                                  const Corpus& corpus) {
  sort_ranked(hypotheses, corpus);
  std::unordered_set<DocId> used_src, used_tgt;
  std::vector<AlignmentHypothesis> kept;
  for (AlignmentHypothesis& h : hypotheses) {
    if (used_src.contains(h.src) || used_tgt.contains(h.tgt)) continue;
    used_src.insert(h.src);
    used_tgt.insert(h.tgt);
    kept.push_back(std::move(h));
  }
  return kept;
}

void emit_ranked_list(std::ostream& out, std::vector<AlignmentHypothesis> hypotheses,
                      const Corpus& corpus) {
  sort_ranked(hypotheses, corpus);
  char buf[32];
  for (const AlignmentHypothesis& h : hypotheses) {
    std::snprintf(buf, sizeof(buf), "%.6f", h.combined);
    out << buf << '\t' << corpus.doc(h.src).url << '\t' << corpus.doc(h.tgt).url << '\n';
  }
}

std::vector<std::pair<std::string, std::string>> load_alignment(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open alignment file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos ||
        line.find('\t', t2 + 1) != std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 3 tab-separated fields");
    }
    pairs.emplace_back(line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1));
  }
  return pairs;
}

}  // namespace lsalign
