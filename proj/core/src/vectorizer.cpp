#include "lsalign/vectorizer.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "lsalign/unicode.hpp"

namespace lsalign {

namespace {

std::string term_key(std::string_view lang, std::string_view token) {
  std::string key;
  key.reserve(lang.size() + 1 + token.size());
  key.append(lang);
  key.push_back('\t');
  key.append(token);
  return key;
}

/// Folded token -> occurrence count for one document's text.
std::unordered_map<std::string, std::size_t> folded_counts(const Document& doc) {
  std::unordered_map<std::string, std::size_t> counts;
  for (std::string_view tok : tokenize_text(doc.text)) {
    ++counts[fold_token(tok)];
  }
  return counts;
}

}  // namespace

std::string fold_token(std::string_view token) { return uni::lower_utf8(token); }

Vocabulary Vocabulary::build(const Corpus& corpus) {
  if (corpus.empty()) throw std::runtime_error("cannot build a vocabulary from an empty corpus");
  std::set<std::pair<std::string, std::string>> term_set;
  for (const Document& doc : corpus.documents()) {
    for (std::string_view tok : tokenize_text(doc.text)) {
      term_set.emplace(doc.lang, fold_token(tok));
    }
  }
  Vocabulary vocab;
  vocab.terms_.assign(term_set.begin(), term_set.end());
  vocab.index_.reserve(vocab.terms_.size());
  std::string serialized;
  for (std::uint32_t row = 0; row < vocab.terms_.size(); ++row) {
    const auto& [lang, token] = vocab.terms_[row];
    vocab.index_.emplace(term_key(lang, token), row);
    serialized.append(lang);
    serialized.push_back('\t');
    serialized.append(token);
    serialized.push_back('\n');
  }
  unsigned int len = 0;
  EVP_Digest(serialized.data(), serialized.size(), vocab.fingerprint_.data(), &len,
             EVP_sha256(), nullptr);
  return vocab;
}

std::optional<std::uint32_t> Vocabulary::row(std::string_view lang,
                                             std::string_view folded_token) const {
  const auto it = index_.find(term_key(lang, folded_token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

DomainIdf compute_domain_idf(const Corpus& corpus, std::string_view domain) {
  const auto it = corpus.by_domain().find(std::string(domain));
  if (it == corpus.by_domain().end()) {
    throw std::runtime_error("unknown domain '" + std::string(domain) + "'");
  }
  const std::vector<DocId>& ids = it->second;
  DomainIdf out;
  out.doc_count = ids.size();
  std::unordered_map<std::string, std::size_t> df;
  for (DocId id : ids) {
    for (const auto& [token, count] : folded_counts(corpus.doc(id))) {
      ++df[token];
    }
  }
  const double n = static_cast<double>(out.doc_count);
  out.idf.reserve(df.size());
  for (const auto& [token, docs_with] : df) {
    // A term present in every document of the domain gets exactly 0.
    out.idf.emplace(token, docs_with == out.doc_count
                               ? 0.0
                               : std::log(n / static_cast<double>(docs_with)));
  }
  return out;
}

IdfTable IdfTable::build(const Corpus& corpus, IdfScope scope) {
  IdfTable table;
  table.scope_ = scope;
  if (scope == IdfScope::kGlobal) {
    DomainIdf& g = table.global_;
    g.doc_count = corpus.size();
    std::unordered_map<std::string, std::size_t> df;
    for (const Document& doc : corpus.documents()) {
      for (const auto& [token, count] : folded_counts(doc)) ++df[token];
    }
    const double n = static_cast<double>(g.doc_count);
    for (const auto& [token, docs_with] : df) {
      g.idf.emplace(token, docs_with == g.doc_count
                               ? 0.0
                               : std::log(n / static_cast<double>(docs_with)));
    }
    return table;
  }
  for (const auto& [domain, ids] : corpus.by_domain()) {
    table.by_domain_.emplace(domain, compute_domain_idf(corpus, domain));
  }
  return table;
}

const DomainIdf& IdfTable::for_domain(std::string_view domain) const {
  if (scope_ == IdfScope::kGlobal) return global_;
  const auto it = by_domain_.find(std::string(domain));
  if (it == by_domain_.end()) {
    throw std::runtime_error("no idf table for domain '" + std::string(domain) + "'");
  }
  return it->second;
}

double weight_term(std::size_t count, double idf) {
  if (count == 0) throw std::runtime_error("weight_term: zero count (absent term)");
  return (1.0 + std::log(static_cast<double>(count))) * idf;
}

double SparseVector::norm() const {
  double sum = 0.0;
  for (const auto& [row, w] : entries) sum += w * w;
  return std::sqrt(sum);
}

SparseVector sparse_add(const SparseVector& a, const SparseVector& b) {
  SparseVector out;
  out.dim = std::max(a.dim, b.dim);
  out.entries.reserve(a.entries.size() + b.entries.size());
  std::size_t i = 0, j = 0;
  while (i < a.entries.size() || j < b.entries.size()) {
    if (j >= b.entries.size() ||
        (i < a.entries.size() && a.entries[i].first < b.entries[j].first)) {
      out.entries.push_back(a.entries[i++]);
    } else if (i >= a.entries.size() || b.entries[j].first < a.entries[i].first) {
      out.entries.push_back(b.entries[j++]);
    } else {
      const double w = a.entries[i].second + b.entries[j].second;
      if (w != 0.0) out.entries.emplace_back(a.entries[i].first, w);
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVector doc_to_column(const Document& doc, const Vocabulary& vocab,
                           const IdfTable& idf) {
  const DomainIdf& table = idf.for_domain(doc.domain);
  SparseVector col;
  col.dim = vocab.size();
  std::map<std::uint32_t, double> weights;
  for (const auto& [token, count] : folded_counts(doc)) {
    const auto row = vocab.row(doc.lang, token);
    if (!row) continue;
    const auto idf_it = table.idf.find(token);
    // The token occurs in this document, so the domain table must know it.
    const double idf_value = idf_it == table.idf.end() ? 0.0 : idf_it->second;
    const double w = weight_term(count, idf_value);
    if (w != 0.0) weights.emplace(*row, w);
  }
  col.entries.assign(weights.begin(), weights.end());
  return col;
}

std::size_t TermDocMatrix::nnz() const {
  std::size_t n = 0;
  for (const SparseVector& col : cols) n += col.entries.size();
  return n;
}

double TermDocMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const SparseVector& col : cols) {
    for (const auto& [row, w] : col.entries) sum += w * w;
  }
  return std::sqrt(sum);
}

void TermDocMatrix::dump(std::ostream& out) const {
  out << rows << ' ' << cols.size() << ' ' << nnz() << '\n';
  char buf[64];
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (const auto& [row, w] : cols[c].entries) {
      std::snprintf(buf, sizeof(buf), "%.17g", w);
      out << row << ' ' << c << ' ' << buf << '\n';
    }
  }
}

TermDocMatrix build_term_doc_matrix(const Corpus& corpus, const PairList& train_pairs,
                                    const Vocabulary& vocab, const IdfTable& idf) {
  if (train_pairs.empty()) {
    throw std::runtime_error("cannot build a term-document matrix from an empty pair list");
  }
  TermDocMatrix m;
  m.rows = vocab.size();
  m.cols.reserve(train_pairs.size());
  m.col_pairs = train_pairs.pairs;
  std::size_t empty_cols = 0;
  for (const auto& [src_url, tgt_url] : train_pairs.pairs) {
    const Document& src = corpus.doc(corpus.require_url(src_url));
    const Document& tgt = corpus.doc(corpus.require_url(tgt_url));
    SparseVector col = sparse_add(doc_to_column(src, vocab, idf),
                                  doc_to_column(tgt, vocab, idf));
    if (col.empty()) ++empty_cols;
    col.dim = vocab.size();
    m.cols.push_back(std::move(col));
  }
  if (empty_cols > 0) {
    std::cerr << "warning: " << empty_cols << " of " << m.cols.size()
              << " training columns carry no nonzero weights (degenerate idf)\n";
  }
  return m;
}

}  // namespace lsalign
