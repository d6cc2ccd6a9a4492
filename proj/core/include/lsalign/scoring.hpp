#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lsalign/corpus.hpp"
#include "lsalign/lsi.hpp"

namespace lsalign {

/// Cosine of the angle between two embeddings; nullopt when either vector
/// is zero (no semantic evidence).
std::optional<double> cosine(const Embedding& a, const Embedding& b);

/// Arithmetic mean of a non-empty set of embeddings.
Embedding domain_mean(std::span<const Embedding> embeddings);

/// Cosine after shifting the origin to `mean`; nullopt when a centered
/// operand is zero.
std::optional<double> local_cosine(const Embedding& a, const Embedding& b,
                                   const Embedding& mean);

/// Length of the longest common subsequence, classic O(|a|*|b|) DP with two
/// rolling rows. Works over any equality-comparable element type: code
/// points for URL cognate scoring, text tokens for document similarity.
template <typename T>
std::size_t lcss_len(std::span<const T> a, std::span<const T> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t lcss_len(const std::u32string& a, const std::u32string& b);
std::size_t lcss_len(const std::vector<std::string_view>& a,
                     const std::vector<std::string_view>& b);

/// Position-independent URL token counts for one domain (all URLs of the
/// domain, both languages, counting multiplicity).
struct UrlTokenCounts {
  std::unordered_map<std::string, std::size_t> counts;

  /// Throws if the token was never seen; the stats must cover every token
  /// that scoring encounters.
  std::size_t count(const std::string& token) const;
};

enum class UrlCountScope {
  kPerDomain,  // counts over the domain's URLs (default)
  kGlobal,     // counts over every URL in the collection (ablation mode)
};

/// URL token statistics per domain.
class DomainUrlStats {
 public:
  static DomainUrlStats build(const Corpus& corpus,
                              UrlCountScope scope = UrlCountScope::kPerDomain);

  const UrlTokenCounts& for_domain(std::string_view domain) const;

  UrlCountScope scope() const { return scope_; }

 private:
  UrlCountScope scope_ = UrlCountScope::kPerDomain;
  std::map<std::string, UrlTokenCounts, std::less<>> by_domain_;
  UrlTokenCounts global_;
};

/// Match score for one token pair:
///   0                      if t1 != t2 and at least one is numeric,
///   1 / cnt(t1)^2          if t1 == t2,
///   2*lcss/(len1+len2) * 1/(cnt(t1)*cnt(t2))   for two letter tokens,
/// with lengths and lcss over Unicode scalar values. Frequent URL components
/// are discounted by their counts.
double url_token_match_score(const std::string& t1, const std::string& t2,
                             const UrlTokenCounts& counts);

/// Cumulative score of the best monotone alignment of the two token
/// sequences (Needleman-Wunsch with zero gap cost).
double url_similarity(const UrlTokens& u1, const UrlTokens& u2,
                      const UrlTokenCounts& counts);

}  // namespace lsalign
