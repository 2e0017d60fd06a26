#pragma once

#include "mixlid/corpus.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mixlid {

/// Longest gram length any model can hold.
inline constexpr int kMaxGramLength = 12;

struct NgramRange {
  int min_n = 1;
  int max_n = 1;

  NgramRange() = default;
  /// Throws std::invalid_argument unless 1 <= min_n <= max_n <= 12.
  NgramRange(int min, int max);

  bool contains(int n) const { return n >= min_n && n <= max_n; }
  bool operator==(const NgramRange&) const = default;
  auto operator<=>(const NgramRange&) const = default;
};

/// Parses "2-6" (or a bare "3" for 3-3).
NgramRange parse_range(std::string_view text);
std::string format_range(const NgramRange& r);

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

using CountMap = std::unordered_map<std::string, std::uint64_t, StringHash, std::equal_to<>>;

/// Counts of items of one kind (one gram length, or whole words) and their
/// token total.
class FrequencyTable {
 public:
  void add(std::string_view item, std::uint64_t count = 1);
  std::uint64_t count(std::string_view item) const;
  std::uint64_t total() const { return total_; }
  bool empty() const { return total_ == 0; }
  const CountMap& counts() const { return counts_; }
  void clear();

  bool operator==(const FrequencyTable&) const = default;

 private:
  CountMap counts_;
  std::uint64_t total_ = 0;
};

/// How text becomes grams.
struct FeatureOptions {
  bool lowercase = true;
  bool pad = true;  // " w " around each word
  Segmentation segmentation = Segmentation::words;

  bool operator==(const FeatureOptions&) const = default;
};

/// Calls fn(gram, n) for every length-n substring of the (optionally padded)
/// word, n ascending, then by position. `word` must be valid UTF-8.
template <class Fn>
void for_each_ngram(std::string_view word, NgramRange range, bool pad, Fn&& fn) {
  std::string padded;
  padded.reserve(word.size() + 2);
  if (pad) padded.push_back(' ');
  padded.append(word);
  if (pad) padded.push_back(' ');

  std::vector<std::size_t> offsets;
  offsets.reserve(padded.size() + 1);
  for (std::size_t i = 0; i < padded.size(); ++i) {
    if ((static_cast<unsigned char>(padded[i]) & 0xC0) != 0x80) offsets.push_back(i);
  }
  offsets.push_back(padded.size());
  const int length = static_cast<int>(offsets.size()) - 1;

  const std::string_view view(padded);
  for (int n = range.min_n; n <= range.max_n && n <= length; ++n) {
    for (int i = 0; i + n <= length; ++i) {
      fn(view.substr(offsets[i], offsets[i + n] - offsets[i]), n);
    }
  }
}

/// The multiset of character n-grams of the words (or their lowercased forms).
std::vector<std::string> extract_ngrams(const NormalizedText& norm, NgramRange range,
                                        bool lowercase, bool pad = true);

/// Per-language gram counts for every length in a range.
class NgramModel {
 public:
  NgramModel(std::string language, NgramRange range, double penalty_modifier);

  const std::string& language() const { return language_; }
  const NgramRange& range() const { return range_; }
  double penalty_modifier() const { return pm_; }
  void set_penalty_modifier(double pm);

  /// Adds grams; lengths outside the range are ignored.
  void add(std::span<const std::string> grams);
  void add(std::string_view gram, int length, std::uint64_t count);

  std::uint64_t count(std::string_view gram, int length) const;
  std::uint64_t total(int length) const;
  std::uint64_t total_all() const;
  double relative_frequency(std::string_view gram, int length) const;

  /// pm * -log(1 / total(length)). A length with no tokens falls back to the
  /// total over all lengths.
  double penalty(int length) const { return penalties_[length]; }

  const FrequencyTable& table(int length) const { return tables_[length]; }

  bool operator==(const NgramModel&) const = default;

 private:
  void refresh_penalties();

  std::string language_;
  NgramRange range_;
  double pm_;
  std::vector<FrequencyTable> tables_;  // indexed by gram length
  std::vector<double> penalties_;
};

/// One NgramModel per language, sharing range, penalty modifier and feature
/// options. Languages are kept sorted by code.
class ModelSet {
 public:
  ModelSet() = default;
  ModelSet(NgramRange range, double penalty_modifier, FeatureOptions options = {});

  const NgramRange& range() const { return range_; }
  double penalty_modifier() const { return pm_; }
  void set_penalty_modifier(double pm);
  const FeatureOptions& options() const { return options_; }

  std::span<const NgramModel> models() const { return models_; }
  std::vector<std::string> languages() const;
  std::size_t size() const { return models_.size(); }
  bool empty() const { return models_.empty(); }

  /// Index of a language in models(), or npos.
  std::size_t index_of(std::string_view language) const;
  const NgramModel& model(std::string_view language) const;
  NgramModel& model(std::string_view language);
  NgramModel& model_at(std::size_t index) { return models_[index]; }

  /// Adds an empty model; throws if it already exists.
  NgramModel& add_language(const std::string& language);

  /// Grams of a text under this set's feature options.
  std::vector<std::string> grams(std::string_view text) const;

  bool operator==(const ModelSet&) const = default;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  NgramRange range_;
  double pm_ = 1.0;
  FeatureOptions options_;
  std::vector<NgramModel> models_;
};

/// Accumulates counts per label. Throws DataError for an unlabeled document
/// or a language whose documents yield no grams.
ModelSet build_models(const Corpus& train, NgramRange range, double penalty_modifier,
                      FeatureOptions options = {});

/// Adds a document's grams to one language's model. Throws DataError for an
/// unknown language. Returns the number of gram tokens added.
std::uint64_t add_document(ModelSet& models, const Document& doc,
                           std::string_view language);

}  // namespace mixlid
