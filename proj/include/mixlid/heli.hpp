#pragma once

#include "mixlid/corpus.hpp"
#include "mixlid/ngram.hpp"
#include "mixlid/scorers.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mixlid {

// Word-level backoff identifier. Each word is scored in the first domain that
// knows it: original-case words, lowercased words, original-case grams
// (longest length first), lowercased grams. Document score is the mean of the
// word scores; lower is better.

enum class HeliPenalty {
  relative,  // pm * -log(1 / total) of the domain
  constant,  // pm itself
};

struct HeliConfig {
  std::optional<NgramRange> lowercased_grams;  // lnr
  std::optional<NgramRange> original_grams;    // onr
  bool lowercased_words = true;                // lw
  bool original_words = true;                  // ow
  double pm = 1.11;
  HeliPenalty penalty = HeliPenalty::relative;
  bool pad = true;

  /// Throws std::invalid_argument when no domain is enabled or pm <= 0.
  void validate() const;

  bool operator==(const HeliConfig&) const = default;
};

/// Sub-model kinds, in file order.
enum class HeliKind { gram_lowercased, gram_original, word_lowercased, word_original };

std::string_view heli_kind_name(HeliKind k);  // gramL, gramO, wordL, wordO
HeliKind parse_heli_kind(std::string_view name);

class HeliModel {
 public:
  explicit HeliModel(std::string language);

  const std::string& language() const { return language_; }

  void add_word(std::string_view original, std::string_view lowercased, const HeliConfig& config);
  void add(HeliKind kind, int length, std::string_view item, std::uint64_t count);

  /// Word tables use length 0.
  const FrequencyTable& table(HeliKind kind, int length = 0) const;

  /// Penalty base -log(1 / total) of a sub-model. An empty gram length falls
  /// back to the total over all lengths of that casing, then to the word total.
  double penalty_base(HeliKind kind, int length) const;

  bool operator==(const HeliModel&) const = default;

 private:
  FrequencyTable& mutable_table(HeliKind kind, int length);

  std::string language_;
  FrequencyTable words_original_;
  FrequencyTable words_lowercased_;
  std::vector<FrequencyTable> grams_original_;
  std::vector<FrequencyTable> grams_lowercased_;
};

class HeliModelSet {
 public:
  HeliModelSet() = default;
  explicit HeliModelSet(HeliConfig config);

  const HeliConfig& config() const { return config_; }
  void set_penalty_modifier(double pm);

  std::span<const HeliModel> models() const { return models_; }
  std::vector<std::string> languages() const;
  std::size_t size() const { return models_.size(); }
  bool empty() const { return models_.empty(); }
  std::size_t index_of(std::string_view language) const;
  HeliModel& add_language(const std::string& language);
  HeliModel& model_at(std::size_t i) { return models_[i]; }
  HeliModel& model(std::string_view language);

  /// Adds every word of the text to the enabled domains of one language.
  /// Returns the number of words added.
  std::uint64_t add_text(std::size_t language, const NormalizedText& norm);

  bool operator==(const HeliModelSet&) const = default;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  HeliConfig config_;
  std::vector<HeliModel> models_;
};

HeliModelSet heli_build(const Corpus& train, const HeliConfig& config);

/// Per-language value of one word, in language order.
std::vector<double> heli_score_word(std::string_view original, std::string_view lowercased,
                                    const HeliModelSet& models);

/// Mean word value per language of a normalized text; all zeros when it has
/// no words.
std::vector<double> heli_score_text(const NormalizedText& norm, const HeliModelSet& models);

Prediction heli_classify(const Document& doc, const HeliModelSet& models);

/// HeliModelSet in the shape the adaptation loop drives.
class HeliIdentifier {
 public:
  using Features = NormalizedText;

  explicit HeliIdentifier(HeliModelSet models);

  const HeliModelSet& models() const { return models_; }
  Polarity polarity() const { return Polarity::lower_is_better; }
  const std::vector<std::string>& languages() const { return languages_; }

  /// A word's domain depends on every language's model, so a language's
  /// score can change when another language adopts a document.
  static constexpr bool kIndependentLanguages = false;

  Features features(const Document& doc) const { return normalize(doc.text); }
  std::vector<double> scores(const Features& f) const;
  std::uint64_t adopt(const Features& f, std::size_t language);

 private:
  HeliModelSet models_;
  std::vector<std::string> languages_;
};

}  // namespace mixlid
