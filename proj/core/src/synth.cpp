#include "lsalign/synth.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lsalign/corpus.hpp"
#include "lsalign/rng.hpp"

namespace lsalign {

namespace {

/// Letters-only rendering of an index ("aa", "ab", ...), so that URL slugs
/// survive letter/digit tokenization as single blocks.
std::string alpha(std::size_t i) {
  std::string out;
  do {
    out.insert(out.begin(), static_cast<char>('a' + i % 26));
    i /= 26;
  } while (i > 0);
  if (out.size() < 2) out.insert(out.begin(), 'a');
  return out;
}

struct DomainPlan {
  std::string name;                      // e.g. www.siteaa.com
  std::vector<std::size_t> boilerplate;  // dictionary ids
  std::size_t topic_begin = 0;           // domain's topic slice [begin, end)
  std::size_t topic_end = 0;
};

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace

void SynthConfig::validate() const {
  if (domains == 0 || docs_per_lang == 0) {
    throw std::runtime_error("synth: need at least one domain and one page per language");
  }
  if (vocab_size == 0 || payload_len == 0) {
    throw std::runtime_error("synth: vocabulary and payload sizes must be positive");
  }
  if (boilerplate_frac < 0.0 || boilerplate_frac >= 1.0) {
    throw std::runtime_error("synth: boilerplate fraction must be in [0, 1)");
  }
  if (boilerplate_frac > 0.0 && boilerplate_tokens == 0) {
    throw std::runtime_error("synth: boilerplate fraction needs boilerplate tokens");
  }
  if (noise < 0.0 || noise > 1.0) {
    throw std::runtime_error("synth: noise rate must be in [0, 1]");
  }
  if (duplicates > domains * docs_per_lang) {
    throw std::runtime_error("synth: more duplicates requested than pages exist");
  }
  if (src_lang == tgt_lang) throw std::runtime_error("synth: languages must differ");
  if (out_prefix.empty()) throw std::runtime_error("synth: output prefix required");
}

SynthOutput generate_synthetic(const SynthConfig& config) {
  config.validate();

  const auto src_word = [](std::size_t id) { return "e" + std::to_string(id); };
  const auto tgt_word = [](std::size_t id) { return "f" + std::to_string(id); };

  // Per-domain plans: name, boilerplate token set, topic slice of the
  // dictionary. Half of every payload draw comes from the slice so pages of
  // one site look topically related, the other half from the full
  // dictionary so held-out sites still share vocabulary with the rest.
  const std::size_t slice = std::max<std::size_t>(1, config.vocab_size / config.domains);
  std::vector<DomainPlan> plans(config.domains);
  for (std::size_t d = 0; d < config.domains; ++d) {
    DomainPlan& plan = plans[d];
    plan.name = "www.site" + alpha(d) + ".com";
    plan.topic_begin = (d * slice) % config.vocab_size;
    plan.topic_end = std::min(plan.topic_begin + slice, config.vocab_size);
    rng::SplitMix gen(rng::splitmix64(config.seed ^ (0x6f0a + d)));
    for (std::size_t b = 0; b < config.boilerplate_tokens; ++b) {
      plan.boilerplate.push_back(gen.bounded(config.vocab_size));
    }
  }

  const auto n_boiler = static_cast<std::size_t>(
      static_cast<double>(config.payload_len) * config.boilerplate_frac);
  const std::size_t n_payload = config.payload_len - n_boiler;

  std::vector<Document> docs;
  PairList pairs;
  std::vector<std::pair<std::string, std::string>> dup_log;        // (dup, original)
  std::vector<std::string> distractor_log;
  std::size_t dups_remaining = config.duplicates;

  for (std::size_t d = 0; d < config.domains; ++d) {
    const DomainPlan& plan = plans[d];
    rng::SplitMix gen(rng::splitmix64(config.seed ^ (0xd0c5 + d * 7919)));

    const auto draw_payload_id = [&]() -> std::size_t {
      if (gen.uniform() < 0.5 && plan.topic_end > plan.topic_begin) {
        return plan.topic_begin + gen.bounded(plan.topic_end - plan.topic_begin);
      }
      return gen.bounded(config.vocab_size);
    };

    const auto page_url = [&](const std::string& lang, std::size_t page,
                              const char* slug_suffix) {
      return "http://" + plan.name + "/" + lang + "/" + std::to_string(100 + page) +
             "/story" + alpha(page) + slug_suffix;
    };

    for (std::size_t p = 0; p < config.docs_per_lang; ++p) {
      // Source page: boilerplate block then payload.
      std::vector<std::size_t> ids;
      ids.reserve(config.payload_len);
      for (std::size_t b = 0; b < n_boiler; ++b) {
        ids.push_back(plan.boilerplate[b % plan.boilerplate.size()]);
      }
      for (std::size_t t = 0; t < n_payload; ++t) ids.push_back(draw_payload_id());

      std::vector<std::string> src_tokens, tgt_tokens;
      src_tokens.reserve(ids.size());
      tgt_tokens.reserve(ids.size());
      for (std::size_t id : ids) {
        src_tokens.push_back(src_word(id));
        // Dictionary image with per-token corruption.
        const std::size_t mapped =
            gen.uniform() < config.noise ? gen.bounded(config.vocab_size) : id;
        tgt_tokens.push_back(tgt_word(mapped));
      }

      Document src_doc{plan.name, config.src_lang, page_url(config.src_lang, p, "x"),
                       join(src_tokens)};
      Document tgt_doc{plan.name, config.tgt_lang, page_url(config.tgt_lang, p, "y"),
                       join(tgt_tokens)};
      pairs.pairs.emplace_back(src_doc.url, tgt_doc.url);

      if (dups_remaining > 0) {
        // Exact copy of the target page under a URL that sorts first, so a
        // content-only ranker deterministically picks the clone.
        Document dup = tgt_doc;
        dup.url = "http://" + plan.name + "/" + config.tgt_lang + "/0dup/" +
                  std::to_string(100 + p) + "/story" + alpha(p) + "y";
        dup_log.emplace_back(dup.url, tgt_doc.url);
        docs.push_back(std::move(dup));
        --dups_remaining;
      }
      docs.push_back(std::move(src_doc));
      docs.push_back(std::move(tgt_doc));
    }

    for (std::size_t x = 0; x < config.distractors; ++x) {
      for (const std::string& lang : {config.src_lang, config.tgt_lang}) {
        std::vector<std::string> tokens;
        tokens.reserve(config.payload_len);
        const bool is_src = lang == config.src_lang;
        for (std::size_t b = 0; b < n_boiler; ++b) {
          const std::size_t id = plan.boilerplate[b % plan.boilerplate.size()];
          tokens.push_back(is_src ? src_word(id) : tgt_word(id));
        }
        for (std::size_t t = 0; t < n_payload; ++t) {
          const std::size_t id = draw_payload_id();
          tokens.push_back(is_src ? src_word(id) : tgt_word(id));
        }
        Document doc{plan.name, lang,
                     "http://" + plan.name + "/" + lang + "/" +
                         std::to_string(900 + x) + "/extra" + alpha(x) +
                         (is_src ? "x" : "y"),
                     join(tokens)};
        distractor_log.push_back(doc.url);
        docs.push_back(std::move(doc));
      }
    }
  }

  SynthOutput out;
  out.docs_path = config.out_prefix + ".docs.tsv";
  out.pairs_path = config.out_prefix + ".pairs.tsv";
  out.manifest_path = config.out_prefix + ".manifest.txt";

  Corpus(std::move(docs)).save(out.docs_path);  // runs the duplicate-URL checks
  pairs.save(out.pairs_path);

  std::ofstream manifest(out.manifest_path, std::ios::binary);
  if (!manifest) throw std::runtime_error("cannot write '" + out.manifest_path + "'");
  manifest << "seed\t" << config.seed << '\n'
           << "domains\t" << config.domains << '\n'
           << "docs_per_lang\t" << config.docs_per_lang << '\n'
           << "vocab_size\t" << config.vocab_size << '\n'
           << "payload_len\t" << config.payload_len << '\n'
           << "boilerplate_frac\t" << config.boilerplate_frac << '\n'
           << "boilerplate_tokens\t" << config.boilerplate_tokens << '\n'
           << "noise\t" << config.noise << '\n'
           << "languages\t" << config.src_lang << '\t' << config.tgt_lang << '\n'
           << "pairs\t" << pairs.size() << '\n';
  for (const auto& [dup, original] : dup_log) {
    manifest << "duplicate\t" << dup << '\t' << original << '\n';
  }
  for (const std::string& url : distractor_log) {
    manifest << "distractor\t" << url << '\n';
  }
  return out;
}

}  // namespace lsalign
