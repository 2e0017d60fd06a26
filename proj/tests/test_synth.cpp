#include "mixlid/synth.hpp"

#include <doctest.h>

#include <map>
#include <sstream>

using namespace mixlid;

namespace {

std::string tsv(const Corpus& c) {
  std::ostringstream out;
  write_tsv(out, c);
  return out.str();
}

std::map<std::string, std::size_t> label_counts(const Corpus& c) {
  std::map<std::string, std::size_t> m;
  for (const auto& d : c.docs) ++m[*d.label];
  return m;
}

}  // namespace

TEST_CASE("Lcg64 follows the documented recurrence") {
  Lcg64 g(0);
  CHECK(g.next() == 1442695040888963407ULL);
  CHECK(g.next() == 1442695040888963407ULL * 6364136223846793005ULL + 1442695040888963407ULL);
  Lcg64 h(42);
  for (int i = 0; i < 1000; ++i) {
    const double x = h.next_double();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  Lcg64 p(7);
  const std::vector<double> cumulative = {0.25, 0.5, 1.0};
  std::vector<int> hits(3);
  for (int i = 0; i < 4000; ++i) ++hits[p.pick(cumulative)];
  CHECK(hits[2] > hits[0]);
  CHECK(hits[2] > hits[1]);
}

TEST_CASE("same seed gives byte-identical corpora; distinct seeds differ") {
  for (auto make : {&disjoint_two_language_spec, &overlapping_mixed_spec, &four_language_spec}) {
    CHECK(tsv(generate(make(50, 3))) == tsv(generate(make(50, 3))));
    CHECK(tsv(generate(make(50, 3))) != tsv(generate(make(50, 4))));
  }
}

TEST_CASE("label counts match the synth spec exactly") {
  const auto c = generate(four_language_spec(37, 1));
  CHECK(label_counts(c) ==
        std::map<std::string, std::size_t>{{"kan", 37}, {"mal", 37}, {"oth", 37}, {"tam", 37}});
  for (std::size_t i = 0; i < c.docs.size(); ++i) CHECK(c.docs[i].id == i);

  auto spec = disjoint_two_language_spec(10, 2);
  spec.languages[1].lines = 25;
  CHECK(label_counts(generate(spec)) == std::map<std::string, std::size_t>{{"aa", 10}, {"bb", 25}});
}

TEST_CASE("lines hold the configured number of alphabetic words") {
  auto spec = disjoint_two_language_spec(100, 5);
  const auto c = generate(spec);
  for (const auto& d : c.docs) {
    const auto n = normalize(d.text);
    CHECK(n.words.size() >= spec.min_words);
    CHECK(n.words.size() <= spec.max_words);
    CHECK(n.words == normalize(d.text, Segmentation::words).words);
  }
}

TEST_CASE("disjoint inventories share no characters across labels") {
  const auto c = generate(disjoint_two_language_spec(200, 11));
  for (const auto& d : c.docs) {
    for (char ch : d.text) {
      if (ch == ' ') continue;
      CHECK((*d.label == "aa") == (ch <= 'm'));
    }
  }
}

TEST_CASE("JSON specs parse and validate") {
  const auto spec = parse_synth_spec(R"({
    "seed": 9, "lines_per_language": 4, "words_per_line": [2, 3], "mixing_rate": 0.5,
    "embedded": {"characters": "xyz", "word_lengths": [1, 1]},
    "languages": [
      {"code": "p", "characters": "abc", "weights": [1, 2, 1], "word_lengths": [0.5, 1, 1]},
      {"code": "q", "characters": "அஆஇ", "word_lengths": [1, 1], "lines": 6}
    ]})");
  CHECK(spec.seed == 9);
  CHECK(spec.languages.size() == 2);
  CHECK(spec.languages[1].inventory.characters.size() == 3);
  CHECK(spec.languages[0].inventory.weights[1] == doctest::Approx(0.5));
  const auto c = generate(spec);
  CHECK(label_counts(c) == std::map<std::string, std::size_t>{{"p", 4}, {"q", 6}});

  CHECK_THROWS_AS(parse_synth_spec("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_synth_spec(R"({"languages": []})"), std::invalid_argument);
  CHECK_THROWS_AS(
      parse_synth_spec(R"({"languages": [{"code": "a", "characters": "", "word_lengths": [1]}]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_synth_spec(R"({"languages": [{"code": "a", "characters": "a1", "word_lengths": [1]}]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(parse_synth_spec(R"({"mixing_rate": 1.0, "languages": [{"code": "a",
      "characters": "ab", "word_lengths": [1]}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_synth_spec(R"({"languages": [{"code": "a", "characters": "ab",
      "weights": [1, -1], "word_lengths": [1]}]})"),
                  std::invalid_argument);
}
