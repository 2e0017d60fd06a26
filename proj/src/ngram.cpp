#include "mixlid/ngram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace mixlid {

NgramRange::NgramRange(int min, int max) : min_n(min), max_n(max) {
  if (min < 1 || max < min || max > kMaxGramLength) {
    throw std::invalid_argument("invalid n-gram range " + std::to_string(min) + "-" +
                                std::to_string(max) + " (need 1 <= min <= max <= " +
                                std::to_string(kMaxGramLength) + ")");
  }
}

NgramRange parse_range(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
      throw std::invalid_argument("bad n-gram range '" + std::string(text) + "'");
    }
    return v;
  };
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) {
    const int n = parse_int(text);
    return NgramRange(n, n);
  }
  return NgramRange(parse_int(text.substr(0, dash)), parse_int(text.substr(dash + 1)));
}

std::string format_range(const NgramRange& r) {
  return std::to_string(r.min_n) + "-" + std::to_string(r.max_n);
}

void FrequencyTable::add(std::string_view item, std::uint64_t count) {
  if (count == 0) return;
  auto it = counts_.find(item);
  if (it == counts_.end()) {
    counts_.emplace(std::string(item), count);
  } else {
    it->second += count;
  }
  total_ += count;
}

std::uint64_t FrequencyTable::count(std::string_view item) const {
  auto it = counts_.find(item);
  return it == counts_.end() ? 0 : it->second;
}

void FrequencyTable::clear() {
  counts_.clear();
  total_ = 0;
}

std::vector<std::string> extract_ngrams(const NormalizedText& norm, NgramRange range,
                                        bool lowercase, bool pad) {
  std::vector<std::string> grams;
  const auto& words = lowercase ? norm.lowercased : norm.words;
  for (const auto& w : words) {
    for_each_ngram(w, range, pad,
                   [&](std::string_view g, int) { grams.emplace_back(g); });
  }
  return grams;
}

NgramModel::NgramModel(std::string language, NgramRange range, double penalty_modifier)
    : language_(std::move(language)),
      range_(range),
      pm_(penalty_modifier),
      tables_(kMaxGramLength + 1),
      penalties_(kMaxGramLength + 1, 0.0) {
  if (!(penalty_modifier > 0.0)) {
    throw std::invalid_argument("penalty modifier must be positive");
  }
}

void NgramModel::set_penalty_modifier(double pm) {
  if (!(pm > 0.0)) throw std::invalid_argument("penalty modifier must be positive");
  pm_ = pm;
  refresh_penalties();
}

void NgramModel::add(std::span<const std::string> grams) {
  for (const auto& g : grams) {
    const int n = static_cast<int>(codepoint_count(g));
    if (range_.contains(n)) tables_[n].add(g);
  }
  refresh_penalties();
}

void NgramModel::add(std::string_view gram, int length, std::uint64_t count) {
  if (!range_.contains(length)) return;
  tables_[length].add(gram, count);
  refresh_penalties();
}

std::uint64_t NgramModel::count(std::string_view gram, int length) const {
  if (!range_.contains(length)) return 0;
  return tables_[length].count(gram);
}

std::uint64_t NgramModel::total(int length) const {
  if (!range_.contains(length)) return 0;
  return tables_[length].total();
}

std::uint64_t NgramModel::total_all() const {
  std::uint64_t sum = 0;
  for (const auto& t : tables_) sum += t.total();
  return sum;
}

double NgramModel::relative_frequency(std::string_view gram, int length) const {
  const auto t = total(length);
  return t == 0 ? 0.0 : static_cast<double>(count(gram, length)) / static_cast<double>(t);
}

void NgramModel::refresh_penalties() {
  const auto all = total_all();
  for (int n = 0; n <= kMaxGramLength; ++n) {
    const auto t = tables_[n].total() > 0 ? tables_[n].total() : all;
    penalties_[n] = t > 0 ? pm_ * -std::log(1.0 / static_cast<double>(t)) : 0.0;
  }
}

ModelSet::ModelSet(NgramRange range, double penalty_modifier, FeatureOptions options)
    : range_(range), pm_(penalty_modifier), options_(options) {
  if (!(penalty_modifier > 0.0)) {
    throw std::invalid_argument("penalty modifier must be positive");
  }
}

void ModelSet::set_penalty_modifier(double pm) {
  if (!(pm > 0.0)) throw std::invalid_argument("penalty modifier must be positive");
  pm_ = pm;
  for (auto& m : models_) m.set_penalty_modifier(pm);
}

std::vector<std::string> ModelSet::languages() const {
  std::vector<std::string> out;
  out.reserve(models_.size());
  for (const auto& m : models_) out.push_back(m.language());
  return out;
}

std::size_t ModelSet::index_of(std::string_view language) const {
  auto it = std::lower_bound(models_.begin(), models_.end(), language,
                             [](const NgramModel& m, std::string_view l) {
                               return m.language() < l;
                             });
  if (it == models_.end() || it->language() != language) return npos;
  return static_cast<std::size_t>(it - models_.begin());
}

const NgramModel& ModelSet::model(std::string_view language) const {
  const auto i = index_of(language);
  if (i == npos) throw DataError("unknown language '" + std::string(language) + "'");
  return models_[i];
}

NgramModel& ModelSet::model(std::string_view language) {
  const auto i = index_of(language);
  if (i == npos) throw DataError("unknown language '" + std::string(language) + "'");
  return models_[i];
}

NgramModel& ModelSet::add_language(const std::string& language) {
  if (index_of(language) != npos) {
    throw DataError("duplicate language '" + language + "'");
  }
  auto it = std::lower_bound(models_.begin(), models_.end(), language,
                             [](const NgramModel& m, const std::string& l) {
                               return m.language() < l;
                             });
  return *models_.insert(it, NgramModel(language, range_, pm_));
}

std::vector<std::string> ModelSet::grams(std::string_view text) const {
  return extract_ngrams(normalize(text, options_.segmentation), range_, options_.lowercase,
                        options_.pad);
}

ModelSet build_models(const Corpus& train, NgramRange range, double penalty_modifier,
                      FeatureOptions options) {
  ModelSet set(range, penalty_modifier, options);
  for (const auto& label : train.label_set()) set.add_language(label);
  for (const auto& doc : train.docs) {
    if (!doc.label) {
      throw DataError("training document " + std::to_string(doc.id) + " has no label");
    }
    set.model(*doc.label).add(set.grams(doc.text));
  }
  for (const auto& m : set.models()) {
    if (m.total_all() == 0) {
      throw DataError("language '" + m.language() +
                      "' has no n-grams in range " + format_range(range));
    }
  }
  return set;
}

std::uint64_t add_document(ModelSet& models, const Document& doc, std::string_view language) {
  auto& model = models.model(language);
  const auto grams = models.grams(doc.text);
  if (grams.empty()) return 0;
  model.add(grams);
  return grams.size();
}

}  // namespace mixlid
