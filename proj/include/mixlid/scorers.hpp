#pragma once

#include "mixlid/corpus.hpp"
#include "mixlid/ngram.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mixlid {

enum class Method { simple, sum_rf, nb, heli };

std::string_view method_name(Method m);
/// Accepts "simple", "sumrf" (or "sum_rf"), "nb", "heli".
Method parse_method(std::string_view name);

enum class Polarity { higher_is_better, lower_is_better };

constexpr Polarity polarity_of(Method m) {
  return (m == Method::nb || m == Method::heli) ? Polarity::lower_is_better
                                                : Polarity::higher_is_better;
}

struct LanguageScore {
  std::string language;
  double score = 0.0;

  bool operator==(const LanguageScore&) const = default;
};

/// Scores in language-code order.
using LanguageScores = std::vector<LanguageScore>;

struct Prediction {
  std::size_t doc_id = 0;
  std::string best;
  LanguageScores scores;
  /// |score(best) - score(runner-up)|; 0 on a tie or with a single language.
  double margin = 0.0;

  bool operator==(const Prediction&) const = default;
};

/// Picks the best language under `polarity`. Ties go to the smallest code.
/// `scores` must be sorted by language and non-empty.
Prediction decide(std::size_t doc_id, LanguageScores scores, Polarity polarity);

/// Number of gram tokens found in each model.
LanguageScores score_simple(std::span<const std::string> grams, const ModelSet& models);
/// Sum of relative frequencies; absent grams add 0.
LanguageScores score_sum_rf(std::span<const std::string> grams, const ModelSet& models);
/// Sum of -log relative frequency; absent grams cost the model's penalty for
/// their length. Lower is better.
LanguageScores score_nb(std::span<const std::string> grams, const ModelSet& models);

/// Score of one language model; `method` must not be heli.
double score_model(Method method, std::span<const std::string> grams, const NgramModel& model);

/// Throws DataError on an empty model set and std::invalid_argument for heli.
Prediction classify(const Document& doc, const ModelSet& models, Method method);

/// A ModelSet bound to one of the three gram scorers, in the shape the
/// adaptation loop drives.
class NgramIdentifier {
 public:
  using Features = std::vector<std::string>;

  NgramIdentifier(ModelSet models, Method method);

  const ModelSet& models() const { return models_; }
  Method method() const { return method_; }
  Polarity polarity() const { return polarity_of(method_); }
  const std::vector<std::string>& languages() const { return languages_; }

  /// A language's score depends on its own model only.
  static constexpr bool kIndependentLanguages = true;

  Features features(const Document& doc) const { return models_.grams(doc.text); }
  double score(const Features& f, std::size_t language) const;
  std::vector<double> scores(const Features& f) const;
  /// Returns the number of tokens added.
  std::uint64_t adopt(const Features& f, std::size_t language);

 private:
  ModelSet models_;
  Method method_;
  std::vector<std::string> languages_;
};

}  // namespace mixlid
