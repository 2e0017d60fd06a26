#pragma once

#include "mixlid/corpus.hpp"
#include "mixlid/scorers.hpp"

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace mixlid {

/// Language-model adaptation over a closed set of unlabeled documents.
///
/// One epoch: score every unresolved document, order by margin (descending,
/// ties by ascending id), take the top floor(remaining / splits_left)
/// documents as the next split, fold each of them whose margin exceeds the
/// confidence threshold into the model of its predicted language, mark the
/// split resolved and repeat until no document is left. Adoptions of a split
/// are applied together after it has been chosen.
struct AdaptConfig {
  /// Number of splits; kFull (or any value above the document count) means
  /// one document per split.
  std::size_t k = 1;
  /// Only documents with margin > ct are adopted; unset adopts every one.
  std::optional<double> ct;
  /// 0 disables adaptation. Later epochs start again from every document and
  /// keep the counts adopted so far.
  int epochs = 1;
  /// Re-score only the languages whose models changed in the last split, for
  /// identifiers whose per-language scores are independent. Same output.
  bool incremental = false;

  static constexpr std::size_t kFull = 0;

  /// Throws std::invalid_argument on negative epochs or negative ct.
  void validate() const;
};

struct AdoptionEvent {
  std::size_t iteration = 0;  // 1-based, counted across epochs
  std::size_t doc_id = 0;
  std::string predicted;
  double margin = 0.0;
  bool adopted = false;
  std::uint64_t added = 0;  // feature tokens folded into the model

  bool operator==(const AdoptionEvent&) const = default;
};

/// TSV `iteration doc_id predicted margin adopted(0|1)`, no header.
void write_trace(std::ostream& out, const std::vector<AdoptionEvent>& trace);

template <class M>
concept AdaptiveIdentifier = requires(M& m, const M& cm, const Document& d,
                                      const typename M::Features& f, std::size_t i) {
  { cm.features(d) } -> std::same_as<typename M::Features>;
  { cm.scores(f) } -> std::same_as<std::vector<double>>;
  { cm.polarity() } -> std::same_as<Polarity>;
  { cm.languages() } -> std::convertible_to<const std::vector<std::string>&>;
  { m.adopt(f, i) } -> std::convertible_to<std::uint64_t>;
  { M::kIndependentLanguages } -> std::convertible_to<bool>;
};

namespace detail {

inline Prediction make_prediction(std::size_t doc_id, const std::vector<std::string>& languages,
                                  const std::vector<double>& values, Polarity polarity) {
  LanguageScores scores;
  scores.reserve(languages.size());
  for (std::size_t i = 0; i < languages.size(); ++i) scores.push_back({languages[i], values[i]});
  return decide(doc_id, std::move(scores), polarity);
}

}  // namespace detail

/// Identifies every document of `test`, adapting `model` in place. Returns one
/// prediction per document in input order, each the prediction in force when
/// the document was resolved in the final epoch. Appends to `trace` if given.
template <AdaptiveIdentifier M>
std::vector<Prediction> adaptive_identify(const Corpus& test, M& model, const AdaptConfig& config,
                                          std::vector<AdoptionEvent>* trace = nullptr) {
  config.validate();
  const auto& languages = model.languages();
  const std::size_t n = test.docs.size();
  std::vector<Prediction> out(n);
  if (n == 0) return out;

  std::vector<typename M::Features> features;
  features.reserve(n);
  for (const auto& d : test.docs) features.push_back(model.features(d));

  if (config.epochs == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = detail::make_prediction(test.docs[i].id, languages, model.scores(features[i]),
                                       model.polarity());
    }
    return out;
  }

  const std::size_t splits = (config.k == AdaptConfig::kFull || config.k > n) ? n : config.k;
  std::size_t iteration = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> unresolved(n);
    std::iota(unresolved.begin(), unresolved.end(), 0);
    std::vector<std::vector<double>> cache(n);
    std::vector<bool> dirty(languages.size(), true);

    for (std::size_t splits_left = splits; !unresolved.empty(); --splits_left) {
      ++iteration;
      std::vector<Prediction> current;
      current.reserve(unresolved.size());
      for (const auto i : unresolved) {
        auto& values = cache[i];
        if constexpr (M::kIndependentLanguages) {
          if (config.incremental && !values.empty()) {
            for (std::size_t l = 0; l < languages.size(); ++l) {
              if (dirty[l]) values[l] = model.score(features[i], l);
            }
          } else {
            values = model.scores(features[i]);
          }
        } else {
          values = model.scores(features[i]);
        }
        current.push_back(
            detail::make_prediction(test.docs[i].id, languages, values, model.polarity()));
      }

      std::vector<std::size_t> order(unresolved.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (current[a].margin != current[b].margin) return current[a].margin > current[b].margin;
        return current[a].doc_id < current[b].doc_id;
      });

      const std::size_t take = splits_left <= 1 ? unresolved.size()
                                                : std::max<std::size_t>(
                                                      1, unresolved.size() / splits_left);
      std::fill(dirty.begin(), dirty.end(), false);
      std::vector<bool> resolved_now(unresolved.size(), false);
      for (std::size_t r = 0; r < take; ++r) {
        const auto pos = order[r];
        const auto doc = unresolved[pos];
        const auto& pred = current[pos];
        const bool adopt = !config.ct || pred.margin > *config.ct;
        std::uint64_t added = 0;
        if (adopt) {
          const auto lang = static_cast<std::size_t>(
              std::find(languages.begin(), languages.end(), pred.best) - languages.begin());
          added = model.adopt(features[doc], lang);
          if (added > 0) dirty[lang] = true;
        }
        if (trace) {
          trace->push_back({iteration, pred.doc_id, pred.best, pred.margin, adopt, added});
        }
        out[doc] = pred;
        resolved_now[pos] = true;
      }

      std::vector<std::size_t> rest;
      rest.reserve(unresolved.size() - take);
      for (std::size_t p = 0; p < unresolved.size(); ++p) {
        if (!resolved_now[p]) rest.push_back(unresolved[p]);
      }
      unresolved = std::move(rest);
    }
  }
  return out;
}

}  // namespace mixlid
