#pragma once

#include <cstddef>
#include <cstdint>

namespace lsalign::uni::detail {

struct CodepointRange {
  char32_t first;
  char32_t last;
};

struct LowerMapping {
  char32_t from;
  char32_t to;
};

extern const CodepointRange kLetterRanges[];
extern const std::size_t kLetterRanges_size;

extern const CodepointRange kDigitRanges[];
extern const std::size_t kDigitRanges_size;

extern const LowerMapping kLowerMappings[];
extern const std::size_t kLowerMappings_size;

}  // namespace lsalign::uni::detail
