#include "lsalign/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lsalign/unicode.hpp"

namespace lsalign {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

[[noreturn]] void fail_at(const std::string& path, std::size_t line_no, const std::string& msg) {
  fail(path + ":" + std::to_string(line_no) + ": " + msg);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

}  // namespace

std::string base64_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 3 <= bytes.size()) {
    const std::uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                            (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                            static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(kB64Alphabet[(v >> 18) & 63]);
    out.push_back(kB64Alphabet[(v >> 12) & 63]);
    out.push_back(kB64Alphabet[(v >> 6) & 63]);
    out.push_back(kB64Alphabet[v & 63]);
    i += 3;
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t v = static_cast<unsigned char>(bytes[i]) << 16;
    out.push_back(kB64Alphabet[(v >> 18) & 63]);
    out.push_back(kB64Alphabet[(v >> 12) & 63]);
    out.append("==");
  } else if (rest == 2) {
    const std::uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                            (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out.push_back(kB64Alphabet[(v >> 18) & 63]);
    out.push_back(kB64Alphabet[(v >> 12) & 63]);
    out.push_back(kB64Alphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::string base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) fail("base64: length not a multiple of 4");
  std::string out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + static_cast<std::size_t>(k)];
      if (c == '=') {
        // Padding is only valid in the last two positions of the final group.
        if (i + 4 != text.size() || k < 2) fail("base64: misplaced padding");
        vals[k] = 0;
        ++pad;
      } else {
        if (pad > 0) fail("base64: data after padding");
        vals[k] = b64_value(c);
        if (vals[k] < 0) fail(std::string("base64: invalid character '") + c + "'");
      }
    }
    const std::uint32_t v = (static_cast<std::uint32_t>(vals[0]) << 18) |
                            (static_cast<std::uint32_t>(vals[1]) << 12) |
                            (static_cast<std::uint32_t>(vals[2]) << 6) |
                            static_cast<std::uint32_t>(vals[3]);
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    if (pad < 2) out.push_back(static_cast<char>((v >> 8) & 0xFF));
    if (pad < 1) out.push_back(static_cast<char>(v & 0xFF));
  }
  return out;
}

Corpus::Corpus(std::vector<Document> documents) : docs_(std::move(documents)) {
  by_url_.reserve(docs_.size());
  for (DocId id = 0; id < docs_.size(); ++id) {
    const Document& d = docs_[id];
    if (d.url.empty()) fail("document " + std::to_string(id) + ": empty url");
    if (d.domain.empty()) fail("document '" + d.url + "': empty domain");
    if (d.lang.empty()) fail("document '" + d.url + "': empty language");
    if (!by_url_.emplace(d.url, id).second) fail("duplicate url '" + d.url + "'");
    by_domain_[d.domain].push_back(id);
  }
}

Corpus Corpus::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open docs file '" + path + "'");
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!uni::is_valid_utf8(line)) fail_at(path, line_no, "line is not valid UTF-8");
    const auto fields = split_tabs(line);
    if (fields.size() != 4) {
      fail_at(path, line_no,
              "expected 4 tab-separated fields, got " + std::to_string(fields.size()));
    }
    Document d;
    d.domain = std::string(fields[0]);
    d.lang = std::string(fields[1]);
    d.url = std::string(fields[2]);
    try {
      d.text = base64_decode(fields[3]);
    } catch (const std::exception& e) {
      fail_at(path, line_no, e.what());
    }
    if (!uni::is_valid_utf8(d.text)) fail_at(path, line_no, "decoded text is not valid UTF-8");
    if (d.domain.empty() || d.lang.empty() || d.url.empty()) {
      fail_at(path, line_no, "domain, lang and url must be non-empty");
    }
    docs.push_back(std::move(d));
  }
  try {
    return Corpus(std::move(docs));
  } catch (const std::exception& e) {
    fail(path + ": " + e.what());
  }
}

void Corpus::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write docs file '" + path + "'");
  for (const Document& d : docs_) {
    out << d.domain << '\t' << d.lang << '\t' << d.url << '\t' << base64_encode(d.text)
        << '\n';
  }
  if (!out) fail("I/O error writing '" + path + "'");
}

std::optional<DocId> Corpus::find_url(std::string_view url) const {
  const auto it = by_url_.find(std::string(url));
  if (it == by_url_.end()) return std::nullopt;
  return it->second;
}

DocId Corpus::require_url(std::string_view url) const {
  const auto id = find_url(url);
  if (!id) fail("url '" + std::string(url) + "' does not resolve in the corpus");
  return *id;
}

std::vector<std::string> Corpus::domains() const {
  std::vector<std::string> names;
  names.reserve(by_domain_.size());
  for (const auto& [name, ids] : by_domain_) names.push_back(name);
  return names;
}

PairList PairList::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open pairs file '" + path + "'");
  PairList out;
  std::unordered_map<std::string, std::size_t> seen_src, seen_tgt;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2) {
      fail_at(path, line_no,
              "expected 2 tab-separated URLs, got " + std::to_string(fields.size()));
    }
    std::string src(fields[0]);
    std::string tgt(fields[1]);
    if (src.empty() || tgt.empty()) fail_at(path, line_no, "empty URL");
    if (!seen_src.emplace(src, line_no).second) {
      fail_at(path, line_no, "source url '" + src + "' already paired (gold must be 1:1)");
    }
    if (!seen_tgt.emplace(tgt, line_no).second) {
      fail_at(path, line_no, "target url '" + tgt + "' already paired (gold must be 1:1)");
    }
    out.pairs.emplace_back(std::move(src), std::move(tgt));
  }
  return out;
}

void PairList::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write pairs file '" + path + "'");
  for (const auto& [src, tgt] : pairs) out << src << '\t' << tgt << '\n';
  if (!out) fail("I/O error writing '" + path + "'");
}

std::vector<std::string_view> tokenize_text(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  const auto is_space = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i >= text.size()) break;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

UrlTokens tokenize_url(std::string_view url) {
  UrlTokens out;
  out.url = std::string(url);
  // URLs reaching this point were validated at load; stray bytes in ad hoc
  // inputs decode to U+FFFD, which is neither letter nor digit and therefore
  // acts as a separator.
  const std::u32string cps = uni::decode_utf8_lossy(url);

  std::string current;
  enum class Kind { none, letter, digit } kind = Kind::none;
  const auto flush = [&] {
    if (!current.empty()) out.tokens.push_back(std::move(current));
    current.clear();
    kind = Kind::none;
  };
  for (char32_t cp : cps) {
    Kind k = Kind::none;
    if (uni::is_letter(cp)) k = Kind::letter;
    else if (uni::is_digit(cp)) k = Kind::digit;
    if (k == Kind::none) {
      flush();
      continue;
    }
    if (k != kind) flush();
    kind = k;
    uni::append_utf8(current, cp);
  }
  flush();
  return out;
}

void validate_languages(const Corpus& corpus, std::string_view src_lang,
                        std::string_view tgt_lang) {
  for (const Document& d : corpus.documents()) {
    if (d.lang != src_lang && d.lang != tgt_lang) {
      fail("document '" + d.url + "' has language '" + d.lang + "', expected '" +
           std::string(src_lang) + "' or '" + std::string(tgt_lang) + "'");
    }
  }
}

}  // namespace lsalign
