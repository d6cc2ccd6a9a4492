#include "lsalign/scoring.hpp"

#include <algorithm>
#include <stdexcept>

#include "lsalign/unicode.hpp"

namespace lsalign {

std::optional<double> cosine(const Embedding& a, const Embedding& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return std::nullopt;
  return a.dot(b) / (na * nb);
}

Embedding domain_mean(std::span<const Embedding> embeddings) {
  if (embeddings.empty()) throw std::runtime_error("domain_mean: empty embedding list");
  Embedding sum = Embedding::Zero(embeddings.front().size());
  for (const Embedding& e : embeddings) sum += e;
  return sum / static_cast<double>(embeddings.size());
}

std::optional<double> local_cosine(const Embedding& a, const Embedding& b,
                                   const Embedding& mean) {
  return cosine(a - mean, b - mean);
}

std::size_t lcss_len(const std::u32string& a, const std::u32string& b) {
  return lcss_len(std::span<const char32_t>(a.data(), a.size()),
                  std::span<const char32_t>(b.data(), b.size()));
}

std::size_t lcss_len(const std::vector<std::string_view>& a,
                     const std::vector<std::string_view>& b) {
  return lcss_len(std::span<const std::string_view>(a.data(), a.size()),
                  std::span<const std::string_view>(b.data(), b.size()));
}

std::size_t UrlTokenCounts::count(const std::string& token) const {
  const auto it = counts.find(token);
  if (it == counts.end()) {
    throw std::runtime_error("URL token '" + token + "' missing from the domain's stats");
  }
  return it->second;
}

DomainUrlStats DomainUrlStats::build(const Corpus& corpus, UrlCountScope scope) {
  DomainUrlStats stats;
  stats.scope_ = scope;
  for (const auto& [domain, ids] : corpus.by_domain()) {
    for (DocId id : ids) {
      const UrlTokens toks = tokenize_url(corpus.doc(id).url);
      for (const std::string& t : toks.tokens) {
        if (scope == UrlCountScope::kGlobal) {
          ++stats.global_.counts[t];
        } else {
          ++stats.by_domain_[domain].counts[t];
        }
      }
    }
  }
  return stats;
}

const UrlTokenCounts& DomainUrlStats::for_domain(std::string_view domain) const {
  if (scope_ == UrlCountScope::kGlobal) return global_;
  const auto it = by_domain_.find(domain);
  if (it == by_domain_.end()) {
    throw std::runtime_error("no URL token stats for domain '" + std::string(domain) + "'");
  }
  return it->second;
}

namespace {

bool is_numeric_token(const std::string& token) {
  // tokenize_url emits blocks that are entirely letters or entirely digits,
  // so the first code point decides.
  const std::u32string cps = uni::decode_utf8_lossy(token);
  return !cps.empty() && uni::is_digit(cps.front());
}

}  // namespace

double url_token_match_score(const std::string& t1, const std::string& t2,
                             const UrlTokenCounts& counts) {
  const bool numeric = is_numeric_token(t1) || is_numeric_token(t2);
  if (t1 == t2) {
    const double c = static_cast<double>(counts.count(t1));
    return 1.0 / (c * c);
  }
  if (numeric) return 0.0;
  const std::u32string a = uni::decode_utf8_lossy(t1);
  const std::u32string b = uni::decode_utf8_lossy(t2);
  const double ratio = 2.0 * static_cast<double>(lcss_len(a, b)) /
                       static_cast<double>(a.size() + b.size());
  return ratio / (static_cast<double>(counts.count(t1)) *
                  static_cast<double>(counts.count(t2)));
}

double url_similarity(const UrlTokens& u1, const UrlTokens& u2,
                      const UrlTokenCounts& counts) {
  const std::size_t n1 = u1.tokens.size();
  const std::size_t n2 = u2.tokens.size();
  if (n1 == 0 || n2 == 0) return 0.0;
  // Gaps cost nothing and all pair scores are >= 0, so the recurrence is a
  // max-weight monotone matching.
  std::vector<double> prev(n2 + 1, 0.0), cur(n2 + 1, 0.0);
  for (std::size_t i = 1; i <= n1; ++i) {
    for (std::size_t j = 1; j <= n2; ++j) {
      const double match =
          prev[j - 1] + url_token_match_score(u1.tokens[i - 1], u2.tokens[j - 1], counts);
      cur[j] = std::max({match, prev[j], cur[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[n2];
}

}  // namespace lsalign
