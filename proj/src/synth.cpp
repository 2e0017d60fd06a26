#include "mixlid/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mixlid {

std::size_t Lcg64::pick(const std::vector<double>& cumulative) {
  const double u = next_double();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return it == cumulative.end() ? cumulative.size() - 1
                                : static_cast<std::size_t>(it - cumulative.begin());
}

namespace {

std::vector<std::string> split_codepoints(std::string_view s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i + 1;
    while (j < s.size() && (static_cast<unsigned char>(s[j]) & 0xC0) == 0x80) ++j;
    out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

void normalize_weights(std::vector<double>& w, const std::string& what) {
  if (w.empty()) throw std::invalid_argument(what + ": no weights");
  double sum = 0.0;
  for (const double x : w) {
    if (!(x > 0.0)) throw std::invalid_argument(what + ": weights must be positive");
    sum += x;
  }
  for (auto& x : w) x /= sum;
}

void check_inventory(Inventory& inv, const std::string& what) {
  if (inv.characters.empty()) throw std::invalid_argument(what + ": empty inventory");
  if (inv.weights.size() != inv.characters.size()) {
    throw std::invalid_argument(what + ": weight count does not match characters");
  }
  for (const auto& c : inv.characters) {
    const auto n = normalize(c);
    if (n.words.size() != 1 || n.words[0] != c) {
      throw std::invalid_argument(what + ": '" + c + "' is not a single alphabetic character");
    }
  }
  normalize_weights(inv.weights, what + " characters");
  normalize_weights(inv.length_weights, what + " word lengths");
}

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  std::partial_sum(w.begin(), w.end(), c.begin());
  c.back() = 1.0;
  return c;
}

struct Sampler {
  const Inventory* inventory;
  std::vector<double> chars;
  std::vector<double> lengths;

  explicit Sampler(const Inventory& inv)
      : inventory(&inv), chars(cumulative(inv.weights)), lengths(cumulative(inv.length_weights)) {}

  std::string word(Lcg64& rng) const {
    const std::size_t len = rng.pick(lengths) + 1;
    std::string w;
    for (std::size_t i = 0; i < len; ++i) w += inventory->characters[rng.pick(chars)];
    return w;
  }
};

Inventory parse_inventory(const nlohmann::json& j) {
  Inventory inv;
  inv.characters = split_codepoints(j.at("characters").get<std::string>());
  if (j.contains("weights")) {
    inv.weights = j.at("weights").get<std::vector<double>>();
  } else {
    inv.weights.assign(inv.characters.size(), 1.0);
  }
  inv.length_weights = j.at("word_lengths").get<std::vector<double>>();
  return inv;
}

}  // namespace

void SynthSpec::validate_and_normalize() {
  if (languages.empty()) throw std::invalid_argument("synth spec has no languages");
  if (!(mixing_rate >= 0.0 && mixing_rate < 1.0)) {
    throw std::invalid_argument("mixing rate must lie in [0, 1)");
  }
  if (min_words < 1 || max_words < min_words) {
    throw std::invalid_argument("words per line must satisfy 1 <= min <= max");
  }
  std::set<std::string> codes;
  for (auto& l : languages) {
    if (l.code.empty() || l.code.find_first_of("\t\n\r") != std::string::npos) {
      throw std::invalid_argument("bad language code '" + l.code + "'");
    }
    if (!codes.insert(l.code).second) {
      throw std::invalid_argument("duplicate language code '" + l.code + "'");
    }
    check_inventory(l.inventory, "language " + l.code);
  }
  if (mixing_rate > 0.0) check_inventory(embedded, "embedded inventory");
}

Inventory make_inventory(std::string_view characters, std::vector<double> length_weights,
                         std::vector<double> char_weights) {
  Inventory inv;
  inv.characters = split_codepoints(characters);
  inv.weights = char_weights.empty() ? std::vector<double>(inv.characters.size(), 1.0)
                                     : std::move(char_weights);
  inv.length_weights = std::move(length_weights);
  return inv;
}

Corpus generate(SynthSpec spec) {
  spec.validate_and_normalize();
  Lcg64 rng(spec.seed);

  std::vector<Sampler> natives;
  for (const auto& l : spec.languages) natives.emplace_back(l.inventory);
  const bool mixing = spec.mixing_rate > 0.0;
  const Sampler embedded = mixing ? Sampler(spec.embedded) : natives.front();

  std::vector<std::size_t> target;
  for (const auto& l : spec.languages) {
    target.push_back(l.lines == 0 ? spec.lines_per_language : l.lines);
  }
  const std::size_t rounds = *std::max_element(target.begin(), target.end());
  const std::size_t span = spec.max_words - spec.min_words + 1;

  Corpus corpus;
  for (std::size_t line = 0; line < rounds; ++line) {
    for (std::size_t li = 0; li < spec.languages.size(); ++li) {
      if (line >= target[li]) continue;
      const std::size_t words = spec.min_words + static_cast<std::size_t>(rng.next() >> 33) % span;
      std::string text;
      for (std::size_t w = 0; w < words; ++w) {
        if (w > 0) text += ' ';
        const bool borrowed = mixing && rng.next_double() < spec.mixing_rate;
        text += (borrowed ? embedded : natives[li]).word(rng);
      }
      corpus.docs.push_back({corpus.docs.size(), std::move(text), spec.languages[li].code});
    }
  }
  return corpus;
}

SynthSpec parse_synth_spec(std::string_view json_text) {
  SynthSpec spec;
  try {
    const auto j = nlohmann::json::parse(json_text);
    spec.seed = j.value("seed", std::uint64_t{1});
    spec.lines_per_language = j.value("lines_per_language", std::size_t{100});
    if (j.contains("words_per_line")) {
      const auto wpl = j.at("words_per_line").get<std::vector<std::size_t>>();
      if (wpl.size() != 2) throw std::invalid_argument("words_per_line must be [min, max]");
      spec.min_words = wpl[0];
      spec.max_words = wpl[1];
    }
    spec.mixing_rate = j.value("mixing_rate", 0.0);
    if (j.contains("embedded")) spec.embedded = parse_inventory(j.at("embedded"));
    for (const auto& lj : j.at("languages")) {
      SynthLanguage l;
      l.code = lj.at("code").get<std::string>();
      l.inventory = parse_inventory(lj);
      l.lines = lj.value("lines", std::size_t{0});
      spec.languages.push_back(std::move(l));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad synth spec: ") + e.what());
  }
  spec.validate_and_normalize();
  return spec;
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_synth_spec(ss.str());
}

namespace {

const std::vector<double> kWordLengths = {0.5, 2, 4, 5, 4, 3, 2, 1, 0.5};

std::vector<double> skewed_weights(std::size_t n, std::size_t salt) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 + static_cast<double>((i * 7 + salt * 3) % 5);
  return w;
}

}  // namespace

SynthSpec disjoint_two_language_spec(std::size_t lines_per_language, std::uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;
  spec.lines_per_language = lines_per_language;
  spec.languages.push_back({"aa", make_inventory("abcdefghijklm", kWordLengths), 0});
  spec.languages.push_back({"bb", make_inventory("nopqrstuvwxyz", kWordLengths), 0});
  return spec;
}

SynthSpec overlapping_mixed_spec(std::size_t lines_per_language, std::uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;
  spec.lines_per_language = lines_per_language;
  spec.min_words = 2;
  spec.max_words = 6;
  spec.mixing_rate = 0.9;
  const std::string shared = "aeioukmnrst";
  spec.languages.push_back({"xa", make_inventory(shared + "l", kWordLengths, skewed_weights(12, 0)), 0});
  spec.languages.push_back({"xb", make_inventory(shared + "v", kWordLengths, skewed_weights(12, 1)), 0});
  spec.languages.push_back({"xc", make_inventory(shared + "p", kWordLengths, skewed_weights(12, 2)), 0});
  spec.embedded = make_inventory("etaoinshrdlucmfw", kWordLengths);
  return spec;
}

SynthSpec four_language_spec(std::size_t lines_per_language, std::uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;
  spec.lines_per_language = lines_per_language;
  spec.min_words = 3;
  spec.max_words = 10;
  spec.mixing_rate = 0.3;
  spec.languages.push_back({"kan", make_inventory("abdgklmnruvy", kWordLengths, skewed_weights(12, 0)), 0});
  spec.languages.push_back({"mal", make_inventory("aeiklmnprtvy", kWordLengths, skewed_weights(12, 1)), 0});
  spec.languages.push_back({"oth", make_inventory("bcdefhoqswxz", kWordLengths, skewed_weights(12, 2)), 0});
  spec.languages.push_back({"tam", make_inventory("aeiklmnprtuz", kWordLengths, skewed_weights(12, 3)), 0});
  spec.embedded = make_inventory("etaoinshrdlucmfwgyp", kWordLengths);
  return spec;
}

}  // namespace mixlid
