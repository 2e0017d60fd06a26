#pragma once

// Brute-force reference scorers for tiny ASCII corpora. Shares no code with
// the library: its own tokenizer, its own gram enumeration, std::map counts.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

struct LabeledText {
  std::string text;
  std::string label;
};

inline std::vector<std::string> ascii_words(const std::string& text, bool lower) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      cur += lower ? static_cast<char>(std::tolower(static_cast<unsigned char>(c))) : c;
    } else if (!cur.empty()) {
      words.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

/// Word-major, then length, then position: the order the library emits.
inline std::vector<std::string> grams(const std::string& text, int lo, int hi) {
  std::vector<std::string> out;
  for (const auto& w : ascii_words(text, true)) {
    const std::string p = " " + w + " ";
    for (int n = lo; n <= hi; ++n) {
      for (int i = 0; i + n <= static_cast<int>(p.size()); ++i) out.push_back(p.substr(i, n));
    }
  }
  return out;
}

struct Model {
  std::map<std::pair<std::string, std::string>, std::uint64_t> count;  // (lang, gram)
  std::map<std::pair<std::string, int>, std::uint64_t> total;         // (lang, n)
  std::set<std::string> languages;
  double pm = 1.0;
};

inline Model build(const std::vector<LabeledText>& train, int lo, int hi, double pm) {
  Model m;
  m.pm = pm;
  for (const auto& t : train) {
    m.languages.insert(t.label);
    for (const auto& g : grams(t.text, lo, hi)) {
      ++m.count[{t.label, g}];
      ++m.total[{t.label, static_cast<int>(g.size())}];
    }
  }
  return m;
}

inline std::uint64_t count(const Model& m, const std::string& lang, const std::string& g) {
  auto it = m.count.find({lang, g});
  return it == m.count.end() ? 0 : it->second;
}

inline std::uint64_t total(const Model& m, const std::string& lang, int n) {
  auto it = m.total.find({lang, n});
  return it == m.total.end() ? 0 : it->second;
}

inline std::uint64_t total_all(const Model& m, const std::string& lang) {
  std::uint64_t s = 0;
  for (const auto& [k, v] : m.total) {
    if (k.first == lang) s += v;
  }
  return s;
}

inline double penalty(const Model& m, const std::string& lang, int n) {
  std::uint64_t t = total(m, lang, n);
  if (t == 0) t = total_all(m, lang);
  return m.pm * -std::log(1.0 / static_cast<double>(t));
}

enum class Kind { simple, sum_rf, nb };

inline std::map<std::string, double> scores(const Model& m, const std::vector<std::string>& gs,
                                            Kind kind) {
  std::map<std::string, double> out;
  for (const auto& lang : m.languages) {
    double s = 0.0;
    std::map<int, std::uint64_t> absent;
    for (const auto& g : gs) {
      const int n = static_cast<int>(g.size());
      const auto c = count(m, lang, g);
      switch (kind) {
        case Kind::simple: s += c > 0 ? 1.0 : 0.0; break;
        case Kind::sum_rf:
          s += c > 0 ? static_cast<double>(c) / static_cast<double>(total(m, lang, n)) : 0.0;
          break;
        case Kind::nb:
          if (c > 0) {
            s += -std::log(static_cast<double>(c) / static_cast<double>(total(m, lang, n)));
          } else {
            ++absent[n];
          }
          break;
      }
    }
    // Absent grams are added per length after the found ones.
    for (const auto& [n, k] : absent) s += static_cast<double>(k) * penalty(m, lang, n);
    out[lang] = s;
  }
  return out;
}

/// Product of relative frequencies (penalties mapped back to linear space).
inline std::map<std::string, double> linear_nb(const Model& m, const std::vector<std::string>& gs) {
  std::map<std::string, double> out;
  for (const auto& lang : m.languages) {
    double p = 1.0;
    for (const auto& g : gs) {
      const int n = static_cast<int>(g.size());
      const auto c = count(m, lang, g);
      p *= c > 0 ? static_cast<double>(c) / static_cast<double>(total(m, lang, n))
                 : std::exp(-penalty(m, lang, n));
    }
    out[lang] = p;
  }
  return out;
}

/// Languages best-first; ties by code.
inline std::vector<std::string> ranking(const std::map<std::string, double>& s, bool higher_better) {
  std::vector<std::pair<std::string, double>> v(s.begin(), s.end());
  std::stable_sort(v.begin(), v.end(), [&](const auto& a, const auto& b) {
    return higher_better ? a.second > b.second : a.second < b.second;
  });
  std::vector<std::string> out;
  for (const auto& [l, x] : v) out.push_back(l);
  return out;
}

/// Random text over a small alphabet with punctuation, digits and capitals.
inline std::string random_text(std::mt19937_64& rng, const std::string& alphabet, int max_words) {
  std::uniform_int_distribution<int> words(0, max_words);
  std::uniform_int_distribution<int> len(1, 5);
  std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> sep(0, 5);
  const char* seps[] = {" ", " ", ", ", "!", " 12 ", "."};
  std::string t;
  const int nw = words(rng);
  for (int w = 0; w < nw; ++w) {
    if (w > 0) t += seps[sep(rng)];
    const int l = len(rng);
    for (int i = 0; i < l; ++i) t += alphabet[ch(rng)];
  }
  return t;
}

}  // namespace oracle
