#pragma once

#include "mixlid/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mixlid {

/// 64-bit linear congruential generator (Knuth's MMIX constants):
/// state = state * 6364136223846793005 + 1442695040888963407.
/// next_double() uses the top 53 bits of the new state.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Index drawn proportionally to `cumulative` (ascending, last = 1).
  std::size_t pick(const std::vector<double>& cumulative);

 private:
  std::uint64_t state_;
};

struct Inventory {
  std::vector<std::string> characters;  // one code point each
  std::vector<double> weights;          // same length, normalized
  std::vector<double> length_weights;   // weight of word length i + 1, normalized
};

struct SynthLanguage {
  std::string code;
  Inventory inventory;
  /// Per-language line count; 0 uses SynthSpec::lines_per_language.
  std::size_t lines = 0;
};

struct SynthSpec {
  std::vector<SynthLanguage> languages;
  /// Shared inventory that mixed-in words are drawn from.
  Inventory embedded;
  std::size_t lines_per_language = 100;
  std::size_t min_words = 3;
  std::size_t max_words = 8;
  double mixing_rate = 0.0;
  std::uint64_t seed = 1;

  /// Normalizes weights. Throws std::invalid_argument for an empty inventory,
  /// non-positive weights, non-alphabetic characters, mismatched lengths,
  /// duplicate codes or a mixing rate outside [0, 1).
  void validate_and_normalize();
};

/// Builds an inventory from a UTF-8 string of characters with uniform weights
/// and the given word-length weights.
Inventory make_inventory(std::string_view characters, std::vector<double> length_weights,
                         std::vector<double> char_weights = {});

/// Lines are interleaved across languages (line i of every language in spec
/// order, then line i + 1) until each language has its count.
Corpus generate(SynthSpec spec);

/// JSON spec:
/// {
///   "seed": 7, "lines_per_language": 1000, "words_per_line": [3, 8],
///   "mixing_rate": 0.2,
///   "embedded": {"characters": "abc", "weights": [...], "word_lengths": [...]},
///   "languages": [{"code": "xx", "characters": "...", "weights": [...],
///                  "word_lengths": [...], "lines": 500}]
/// }
/// `weights` is optional (uniform); `word_lengths[i]` weights length i + 1.
SynthSpec parse_synth_spec(std::string_view json_text);
SynthSpec load_synth_spec(const std::filesystem::path& path);

/// Two languages over disjoint alphabets, no mixing.
SynthSpec disjoint_two_language_spec(std::size_t lines_per_language, std::uint64_t seed);
/// Three languages sharing most of their alphabet, mixing rate 0.9.
SynthSpec overlapping_mixed_spec(std::size_t lines_per_language, std::uint64_t seed);
/// Four related languages with moderate overlap plus 30% embedded words.
SynthSpec four_language_spec(std::size_t lines_per_language, std::uint64_t seed);

}  // namespace mixlid
