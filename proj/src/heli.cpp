#include "mixlid/heli.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mixlid {

void HeliConfig::validate() const {
  if (!lowercased_grams && !original_grams && !lowercased_words && !original_words) {
    throw std::invalid_argument("HeLI config enables no domain");
  }
  if (!(pm > 0.0)) throw std::invalid_argument("penalty modifier must be positive");
}

std::string_view heli_kind_name(HeliKind k) {
  switch (k) {
    case HeliKind::gram_lowercased: return "gramL";
    case HeliKind::gram_original: return "gramO";
    case HeliKind::word_lowercased: return "wordL";
    case HeliKind::word_original: return "wordO";
  }
  return "?";
}

HeliKind parse_heli_kind(std::string_view name) {
  if (name == "gramL") return HeliKind::gram_lowercased;
  if (name == "gramO") return HeliKind::gram_original;
  if (name == "wordL") return HeliKind::word_lowercased;
  if (name == "wordO") return HeliKind::word_original;
  throw DataError("unknown sub-model kind '" + std::string(name) + "'");
}

HeliModel::HeliModel(std::string language)
    : language_(std::move(language)),
      grams_original_(kMaxGramLength + 1),
      grams_lowercased_(kMaxGramLength + 1) {}

FrequencyTable& HeliModel::mutable_table(HeliKind kind, int length) {
  return const_cast<FrequencyTable&>(std::as_const(*this).table(kind, length));
}

const FrequencyTable& HeliModel::table(HeliKind kind, int length) const {
  switch (kind) {
    case HeliKind::word_original: return words_original_;
    case HeliKind::word_lowercased: return words_lowercased_;
    default: break;
  }
  if (length < 1 || length > kMaxGramLength) {
    throw std::out_of_range("gram length " + std::to_string(length) + " out of range");
  }
  return kind == HeliKind::gram_original ? grams_original_[length] : grams_lowercased_[length];
}

void HeliModel::add(HeliKind kind, int length, std::string_view item, std::uint64_t count) {
  mutable_table(kind, length).add(item, count);
}

void HeliModel::add_word(std::string_view original, std::string_view lowercased,
                         const HeliConfig& config) {
  if (config.original_words) words_original_.add(original);
  if (config.lowercased_words) words_lowercased_.add(lowercased);
  if (config.original_grams) {
    for_each_ngram(original, *config.original_grams, config.pad,
                   [&](std::string_view g, int n) { grams_original_[n].add(g); });
  }
  if (config.lowercased_grams) {
    for_each_ngram(lowercased, *config.lowercased_grams, config.pad,
                   [&](std::string_view g, int n) { grams_lowercased_[n].add(g); });
  }
}

double HeliModel::penalty_base(HeliKind kind, int length) const {
  std::uint64_t total = table(kind, length).total();
  if (total == 0 && (kind == HeliKind::gram_original || kind == HeliKind::gram_lowercased)) {
    const auto& grams = kind == HeliKind::gram_original ? grams_original_ : grams_lowercased_;
    for (const auto& t : grams) total += t.total();
  }
  if (total == 0) total = std::max(words_original_.total(), words_lowercased_.total());
  return total == 0 ? 0.0 : -std::log(1.0 / static_cast<double>(total));
}

HeliModelSet::HeliModelSet(HeliConfig config) : config_(config) { config_.validate(); }

void HeliModelSet::set_penalty_modifier(double pm) {
  if (!(pm > 0.0)) throw std::invalid_argument("penalty modifier must be positive");
  config_.pm = pm;
}

std::vector<std::string> HeliModelSet::languages() const {
  std::vector<std::string> out;
  for (const auto& m : models_) out.push_back(m.language());
  return out;
}

std::size_t HeliModelSet::index_of(std::string_view language) const {
  for (std::size_t i = 0; i < models_.size(); ++i) {
    if (models_[i].language() == language) return i;
  }
  return npos;
}

HeliModel& HeliModelSet::add_language(const std::string& language) {
  if (index_of(language) != npos) throw DataError("duplicate language '" + language + "'");
  auto it = std::lower_bound(
      models_.begin(), models_.end(), language,
      [](const HeliModel& m, const std::string& l) { return m.language() < l; });
  return *models_.insert(it, HeliModel(language));
}

HeliModel& HeliModelSet::model(std::string_view language) {
  const auto i = index_of(language);
  if (i == npos) throw DataError("unknown language '" + std::string(language) + "'");
  return models_[i];
}

std::uint64_t HeliModelSet::add_text(std::size_t language, const NormalizedText& norm) {
  auto& m = models_.at(language);
  for (std::size_t i = 0; i < norm.words.size(); ++i) {
    m.add_word(norm.words[i], norm.lowercased[i], config_);
  }
  return norm.words.size();
}

HeliModelSet heli_build(const Corpus& train, const HeliConfig& config) {
  HeliModelSet set(config);
  for (const auto& label : train.label_set()) set.add_language(label);
  std::vector<std::uint64_t> words(set.size(), 0);
  for (const auto& doc : train.docs) {
    if (!doc.label) {
      throw DataError("training document " + std::to_string(doc.id) + " has no label");
    }
    const auto i = set.index_of(*doc.label);
    words[i] += set.add_text(i, normalize(doc.text));
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i] == 0) {
      throw DataError("language '" + set.models()[i].language() + "' has no words");
    }
  }
  return set;
}

namespace {

class WordScorer {
 public:
  explicit WordScorer(const HeliModelSet& models)
      : models_(models.models()), config_(models.config()) {}

  std::vector<double> score(std::string_view original, std::string_view lowercased) const {
    std::vector<double> values(models_.size(), 0.0);
    HeliKind last_kind = HeliKind::word_original;
    int last_length = 0;

    if (config_.original_words) {
      if (word_domain(HeliKind::word_original, original, values)) return values;
      last_kind = HeliKind::word_original;
    }
    if (config_.lowercased_words) {
      if (word_domain(HeliKind::word_lowercased, lowercased, values)) return values;
      last_kind = HeliKind::word_lowercased;
    }
    if (config_.original_grams) {
      if (gram_domain(HeliKind::gram_original, original, *config_.original_grams, values)) {
        return values;
      }
      last_kind = HeliKind::gram_original;
      last_length = config_.original_grams->min_n;
    }
    if (config_.lowercased_grams) {
      if (gram_domain(HeliKind::gram_lowercased, lowercased, *config_.lowercased_grams,
                      values)) {
        return values;
      }
      last_kind = HeliKind::gram_lowercased;
      last_length = config_.lowercased_grams->min_n;
    }
    for (std::size_t i = 0; i < models_.size(); ++i) {
      values[i] = penalty(i, last_kind, last_length);
    }
    return values;
  }

 private:
  double penalty(std::size_t lang, HeliKind kind, int length) const {
    if (config_.penalty == HeliPenalty::constant) return config_.pm;
    return config_.pm * models_[lang].penalty_base(kind, length);
  }

  bool found_anywhere(HeliKind kind, int length, std::string_view item) const {
    return std::any_of(models_.begin(), models_.end(), [&](const HeliModel& m) {
      return m.table(kind, length).count(item) > 0;
    });
  }

  void add_values(HeliKind kind, int length, std::string_view item,
                  std::vector<double>& sums) const {
    for (std::size_t i = 0; i < models_.size(); ++i) {
      const auto& t = models_[i].table(kind, length);
      const auto c = t.count(item);
      sums[i] += c > 0 ? -std::log(static_cast<double>(c) / static_cast<double>(t.total()))
                       : penalty(i, kind, length);
    }
  }

  bool word_domain(HeliKind kind, std::string_view word, std::vector<double>& values) const {
    if (!found_anywhere(kind, 0, word)) return false;
    std::fill(values.begin(), values.end(), 0.0);
    add_values(kind, 0, word, values);
    return true;
  }

  static std::string_view drop_last_codepoint(std::string_view s) {
    std::size_t end = s.size();
    while (end > 0) {
      --end;
      if ((static_cast<unsigned char>(s[end]) & 0xC0) != 0x80) break;
    }
    return s.substr(0, end);
  }

  bool gram_domain(HeliKind kind, std::string_view word, NgramRange range,
                   std::vector<double>& values) const {
    const int padded_length =
        static_cast<int>(codepoint_count(word)) + (config_.pad ? 2 : 0);
    if (padded_length < range.min_n) return false;
    const int start = std::min(range.max_n, padded_length);

    std::vector<std::string> grams;
    for (int n = start; n >= range.min_n; --n) {
      grams.clear();
      for_each_ngram(word, NgramRange(n, n), config_.pad,
                     [&](std::string_view g, int) { grams.emplace_back(g); });
      const bool any = std::any_of(grams.begin(), grams.end(), [&](const std::string& g) {
        return found_anywhere(kind, n, g);
      });
      if (!any) continue;

      std::fill(values.begin(), values.end(), 0.0);
      std::size_t used = 0;
      for (const auto& g : grams) {
        std::string_view current = g;
        for (int len = n; len >= range.min_n; --len) {
          if (found_anywhere(kind, len, current)) {
            add_values(kind, len, current, values);
            ++used;
            break;
          }
          current = drop_last_codepoint(current);
        }
      }
      for (auto& v : values) v /= static_cast<double>(used);
      return true;
    }
    return false;
  }

  std::span<const HeliModel> models_;
  const HeliConfig& config_;
};

}  // namespace

std::vector<double> heli_score_word(std::string_view original, std::string_view lowercased,
                                    const HeliModelSet& models) {
  return WordScorer(models).score(original, lowercased);
}

std::vector<double> heli_score_text(const NormalizedText& norm, const HeliModelSet& models) {
  std::vector<double> sums(models.size(), 0.0);
  if (norm.words.empty()) return sums;

  // Words are visited in a canonical order so the floating-point sum does not
  // depend on word order.
  std::vector<std::size_t> order(norm.words.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return norm.words[a] < norm.words[b];
  });

  const WordScorer scorer(models);
  for (const auto i : order) {
    const auto v = scorer.score(norm.words[i], norm.lowercased[i]);
    for (std::size_t l = 0; l < sums.size(); ++l) sums[l] += v[l];
  }
  for (auto& s : sums) s /= static_cast<double>(norm.words.size());
  return sums;
}

Prediction heli_classify(const Document& doc, const HeliModelSet& models) {
  if (models.empty()) throw DataError("empty model set");
  const auto values = heli_score_text(normalize(doc.text), models);
  LanguageScores scores;
  for (std::size_t i = 0; i < values.size(); ++i) {
    scores.push_back({models.models()[i].language(), values[i]});
  }
  return decide(doc.id, std::move(scores), Polarity::lower_is_better);
}

HeliIdentifier::HeliIdentifier(HeliModelSet models)
    : models_(std::move(models)), languages_(models_.languages()) {
  if (models_.empty()) throw DataError("empty model set");
}

std::vector<double> HeliIdentifier::scores(const Features& f) const {
  return heli_score_text(f, models_);
}

std::uint64_t HeliIdentifier::adopt(const Features& f, std::size_t language) {
  return models_.add_text(language, f);
}

}  // namespace mixlid
