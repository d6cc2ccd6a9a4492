#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lsalign {

using DocId = std::uint32_t;

/// One web page: host, language label, URL and the extracted text.
struct Document {
  std::string domain;
  std::string lang;
  std::string url;
  std::string text;

  bool operator==(const Document&) const = default;
};

/// An immutable document collection with URL and domain indexes.
///
/// On-disk format is a UTF-8 TSV with LF line endings and four fields per
/// line: domain, lang, url, base64(text). URLs must be unique.
class Corpus {
 public:
  Corpus() = default;

  /// Builds the indexes; throws on empty URL/domain/lang or duplicate URLs.
  explicit Corpus(std::vector<Document> documents);

  static Corpus load(const std::string& path);
  void save(const std::string& path) const;

  const std::vector<Document>& documents() const { return docs_; }
  const Document& doc(DocId id) const { return docs_[id]; }
  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }

  std::optional<DocId> find_url(std::string_view url) const;

  /// Like find_url but throws naming the URL when it does not resolve.
  DocId require_url(std::string_view url) const;

  /// Domain name -> document ids, ordered by domain name then file order.
  const std::map<std::string, std::vector<DocId>>& by_domain() const { return by_domain_; }

  std::vector<std::string> domains() const;

  bool operator==(const Corpus& other) const { return docs_ == other.docs_; }

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, DocId> by_url_;
  std::map<std::string, std::vector<DocId>> by_domain_;
};

/// Ordered list of known (source URL, target URL) matches. The gold
/// alignment is 1:1, so no URL may repeat on either side.
struct PairList {
  std::vector<std::pair<std::string, std::string>> pairs;

  /// Loads a two-field TSV; throws on bad field counts or repeated URLs.
  static PairList load(const std::string& path);
  void save(const std::string& path) const;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

/// URL split into maximal all-letter / all-digit blocks.
struct UrlTokens {
  std::string url;
  std::vector<std::string> tokens;
};

/// Splits on runs of ASCII whitespace. No case folding, no punctuation
/// stripping; the returned views point into `text`.
std::vector<std::string_view> tokenize_text(std::string_view text);

/// Tokenizes a URL into maximal runs of letters and maximal runs of digits
/// (Unicode categories L* and Nd). Everything else separates tokens and is
/// dropped, as are bytes that do not decode as UTF-8.
UrlTokens tokenize_url(std::string_view url);

/// Throws if any document's language is neither src_lang nor tgt_lang.
void validate_languages(const Corpus& corpus, std::string_view src_lang,
                        std::string_view tgt_lang);

/// Standard-alphabet base64 with padding.
std::string base64_encode(std::string_view bytes);

/// Strict decoder; throws std::runtime_error on any malformed input.
std::string base64_decode(std::string_view text);

}  // namespace lsalign
