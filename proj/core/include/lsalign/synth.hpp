#pragma once

#include <cstdint>
#include <string>

namespace lsalign {

/// Desk-scale synthetic fixture generator: paired pseudo-source and
/// pseudo-target pages related by a bijective token dictionary, with
/// per-domain boilerplate, topic bias, translation noise, optional exact
/// duplicates under distinct URLs, and unpaired distractor pages.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t domains = 20;
  std::size_t docs_per_lang = 30;    // paired pages per language per domain
  std::size_t vocab_size = 400;      // dictionary entries (per language)
  std::size_t payload_len = 60;      // tokens per document
  double boilerplate_frac = 0.3;     // share of each page made of site boilerplate
  std::size_t boilerplate_tokens = 12;  // distinct boilerplate tokens per domain
  double noise = 0.1;                // per-token corruption rate on the target side
  std::size_t duplicates = 0;        // target pages cloned under a second URL
  std::size_t distractors = 0;       // unpaired extra pages per language per domain
  std::string src_lang = "en";
  std::string tgt_lang = "fr";
  std::string out_prefix;            // writes <prefix>.docs.tsv etc.

  void validate() const;
};

struct SynthOutput {
  std::string docs_path;
  std::string pairs_path;
  std::string manifest_path;
};

/// Generates the fixture and writes the docs file, the planted 1:1 pair
/// list, and a manifest describing the configuration, injected duplicates
/// and distractors. Deterministic for a fixed config.
SynthOutput generate_synthetic(const SynthConfig& config);

}  // namespace lsalign
