#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lsalign/corpus.hpp"

namespace lsalign {

/// Canonical form of a text token for vocabulary and idf purposes:
/// code-point-wise simple lowercase.
std::string fold_token(std::string_view token);

/// Language-partitioned term index. A term is a (lang, folded token) pair;
/// identical surface forms in different languages occupy different rows.
class Vocabulary {
 public:
  /// Collects every (lang, token) in the corpus; rows are assigned in
  /// sorted (lang, token) order. Throws on an empty corpus.
  static Vocabulary build(const Corpus& corpus);

  std::size_t size() const { return terms_.size(); }

  std::optional<std::uint32_t> row(std::string_view lang, std::string_view folded_token) const;

  /// (lang, token) held at a row.
  const std::pair<std::string, std::string>& term(std::uint32_t row) const {
    return terms_[row];
  }

  /// SHA-256 over the ordered term list; binds trained models to the exact
  /// vocabulary they were built with.
  const std::array<std::uint8_t, 32>& fingerprint() const { return fingerprint_; }

 private:
  std::vector<std::pair<std::string, std::string>> terms_;
  std::unordered_map<std::string, std::uint32_t> index_;  // "lang\ttoken" -> row
  std::array<std::uint8_t, 32> fingerprint_{};
};

/// Idf statistics for one domain: folded token -> ln(N / df) over all
/// documents of the domain, both languages together.
struct DomainIdf {
  std::unordered_map<std::string, double> idf;
  std::size_t doc_count = 0;
};

/// Computes Idf statistics for a single domain. Throws on unknown domain.
DomainIdf compute_domain_idf(const Corpus& corpus, std::string_view domain);

enum class IdfScope {
  kPerDomain,  // one table per web domain (default)
  kGlobal,     // single table over the whole collection (ablation mode)
};

/// Per-domain (or, behind the ablation flag, global) idf tables.
class IdfTable {
 public:
  static IdfTable build(const Corpus& corpus, IdfScope scope = IdfScope::kPerDomain);

  /// Table to use for documents of `domain`. Throws if the scope is
  /// per-domain and the domain was not seen at build time.
  const DomainIdf& for_domain(std::string_view domain) const;

  IdfScope scope() const { return scope_; }

 private:
  IdfScope scope_ = IdfScope::kPerDomain;
  std::unordered_map<std::string, DomainIdf> by_domain_;
  DomainIdf global_;
};

/// tf-idf weight (1 + ln count) * idf. Absent terms are never materialized,
/// so count must be >= 1.
double weight_term(std::size_t count, double idf);

/// Sparse column with strictly increasing row indices; zero weights are
/// never stored.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;
  std::size_t dim = 0;

  double norm() const;
  bool empty() const { return entries.empty(); }
};

/// Elementwise sum; entries that cancel to zero are dropped.
SparseVector sparse_add(const SparseVector& a, const SparseVector& b);

/// Weighted count column for one document: every in-vocabulary term of the
/// document with nonzero tf-idf weight, using the document's own domain's
/// idf table. Out-of-vocabulary tokens are skipped.
SparseVector doc_to_column(const Document& doc, const Vocabulary& vocab,
                           const IdfTable& idf);

/// Sparse bilingual term-document matrix; one column per training pair.
struct TermDocMatrix {
  std::size_t rows = 0;
  std::vector<SparseVector> cols;
  std::vector<std::pair<std::string, std::string>> col_pairs;  // (src_url, tgt_url)

  std::size_t nnz() const;
  double frobenius_norm() const;

  /// Text dump: header "m n nnz", then one "row col weight" triple per line
  /// (0-based, 17 significant digits).
  void dump(std::ostream& out) const;
};

/// One column per training pair, each the sum of the two documents' columns
/// (row supports are disjoint because the vocabulary is language-partitioned).
/// Pairs whose weighted columns are entirely empty are kept, with a warning,
/// so that column ids stay aligned with the pair list.
TermDocMatrix build_term_doc_matrix(const Corpus& corpus, const PairList& train_pairs,
                                    const Vocabulary& vocab, const IdfTable& idf);

}  // namespace lsalign
