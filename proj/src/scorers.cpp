#include "mixlid/scorers.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace mixlid {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::simple: return "simple";
    case Method::sum_rf: return "sumrf";
    case Method::nb: return "nb";
    case Method::heli: return "heli";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "simple") return Method::simple;
  if (name == "sumrf" || name == "sum_rf") return Method::sum_rf;
  if (name == "nb") return Method::nb;
  if (name == "heli") return Method::heli;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

Prediction decide(std::size_t doc_id, LanguageScores scores, Polarity polarity) {
  if (scores.empty()) throw DataError("no languages to decide between");
  auto better = [polarity](double a, double b) {
    return polarity == Polarity::higher_is_better ? a > b : a < b;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (better(scores[i].score, scores[best].score)) best = i;
  }
  double margin = 0.0;
  bool have_second = false;
  double second = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i == best) continue;
    if (!have_second || better(scores[i].score, second)) {
      second = scores[i].score;
      have_second = true;
    }
  }
  if (have_second) margin = std::fabs(scores[best].score - second);

  Prediction p;
  p.doc_id = doc_id;
  p.best = scores[best].language;
  p.margin = margin;
  p.scores = std::move(scores);
  return p;
}

double score_model(Method method, std::span<const std::string> grams, const NgramModel& model) {
  double score = 0.0;
  switch (method) {
    case Method::simple:
      for (const auto& g : grams) {
        if (model.count(g, static_cast<int>(codepoint_count(g))) > 0) score += 1.0;
      }
      break;
    case Method::sum_rf:
      for (const auto& g : grams) {
        score += model.relative_frequency(g, static_cast<int>(codepoint_count(g)));
      }
      break;
    case Method::nb: {
      // Found grams are summed in input order; absent grams are then added as
      // count * penalty per length, shortest first. Languages related by a
      // relabeling of the alphabet thus get bit-identical scores.
      std::array<std::uint64_t, kMaxGramLength + 1> absent{};
      for (const auto& g : grams) {
        const int n = static_cast<int>(codepoint_count(g));
        const auto c = model.count(g, n);
        if (c > 0) {
          score += -std::log(static_cast<double>(c) / static_cast<double>(model.total(n)));
        } else if (n <= kMaxGramLength) {
          ++absent[n];
        }
      }
      for (int n = 1; n <= kMaxGramLength; ++n) {
        if (absent[n] > 0) score += static_cast<double>(absent[n]) * model.penalty(n);
      }
      break;
    }
    case Method::heli:
      throw std::invalid_argument("heli is not a gram-model scorer");
  }
  return score;
}

namespace {

LanguageScores score_all(Method method, std::span<const std::string> grams,
                         const ModelSet& models) {
  LanguageScores out;
  out.reserve(models.size());
  for (const auto& m : models.models()) {
    out.push_back({m.language(), score_model(method, grams, m)});
  }
  return out;
}

}  // namespace

LanguageScores score_simple(std::span<const std::string> grams, const ModelSet& models) {
  return score_all(Method::simple, grams, models);
}

LanguageScores score_sum_rf(std::span<const std::string> grams, const ModelSet& models) {
  return score_all(Method::sum_rf, grams, models);
}

LanguageScores score_nb(std::span<const std::string> grams, const ModelSet& models) {
  return score_all(Method::nb, grams, models);
}

Prediction classify(const Document& doc, const ModelSet& models, Method method) {
  if (models.empty()) throw DataError("empty model set");
  const auto grams = models.grams(doc.text);
  return decide(doc.id, score_all(method, grams, models), polarity_of(method));
}

NgramIdentifier::NgramIdentifier(ModelSet models, Method method)
    : models_(std::move(models)), method_(method), languages_(models_.languages()) {
  if (method == Method::heli) {
    throw std::invalid_argument("heli is not a gram-model scorer");
  }
  if (models_.empty()) throw DataError("empty model set");
}

double NgramIdentifier::score(const Features& f, std::size_t language) const {
  return score_model(method_, f, models_.models()[language]);
}

std::vector<double> NgramIdentifier::scores(const Features& f) const {
  std::vector<double> out(languages_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = score(f, i);
  return out;
}

std::uint64_t NgramIdentifier::adopt(const Features& f, std::size_t language) {
  if (f.empty()) return 0;
  models_.model_at(language).add(f);
  return f.size();
}

}  // namespace mixlid
