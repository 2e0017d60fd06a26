#include "mixlid/ngram.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace mixlid;

namespace {

std::map<std::string, int> bag(const std::vector<std::string>& grams) {
  std::map<std::string, int> m;
  for (const auto& g : grams) ++m[g];
  return m;
}

Corpus labeled(std::initializer_list<std::pair<const char*, const char*>> rows) {
  Corpus c;
  for (const auto& [text, label] : rows) c.docs.push_back({c.docs.size(), text, label});
  return c;
}

}  // namespace

TEST_CASE("NgramRange validates bounds") {
  CHECK_NOTHROW(NgramRange(1, 12));
  CHECK_THROWS_AS(NgramRange(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(NgramRange(4, 3), std::invalid_argument);
  CHECK_THROWS_AS(NgramRange(1, 13), std::invalid_argument);
  CHECK(parse_range("2-6") == NgramRange(2, 6));
  CHECK(parse_range("3") == NgramRange(3, 3));
  CHECK_THROWS_AS(parse_range("x-2"), std::invalid_argument);
}

TEST_CASE("extract_ngrams pads each word with spaces") {
  NormalizedText ab{{"ab"}, {"ab"}};
  CHECK(bag(extract_ngrams(ab, NgramRange(2, 2), true)) ==
        std::map<std::string, int>{{" a", 1}, {"ab", 1}, {"b ", 1}});

  NormalizedText a{{"a"}, {"a"}};
  CHECK(bag(extract_ngrams(a, NgramRange(1, 3), true)) ==
        std::map<std::string, int>{{" ", 2}, {"a", 1}, {" a", 1}, {"a ", 1}, {" a ", 1}});

  NormalizedText twice{{"ab", "ab"}, {"ab", "ab"}};
  CHECK(bag(extract_ngrams(twice, NgramRange(2, 2), true)) ==
        std::map<std::string, int>{{" a", 2}, {"ab", 2}, {"b ", 2}});

  CHECK(extract_ngrams(NormalizedText{}, NgramRange(1, 5), true).empty());
}

TEST_CASE("extract_ngrams picks the casing and counts code points") {
  const auto n = normalize("ÄbC");
  CHECK(bag(extract_ngrams(n, NgramRange(4, 4), false)) ==
        std::map<std::string, int>{{" ÄbC", 1}, {"ÄbC ", 1}});
  CHECK(bag(extract_ngrams(n, NgramRange(5, 5), true)) == std::map<std::string, int>{{" äbc ", 1}});
  CHECK(bag(extract_ngrams(n, NgramRange(2, 2), true, false)) ==
        std::map<std::string, int>{{"äb", 1}, {"bc", 1}});
}

TEST_CASE("property: a word of length L yields max(0, L+3-n) grams of length n") {
  const std::vector<std::string> letters = {"a", "ö", "த", "Ж", "z"};
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  for (int L = 1; L <= 14; ++L) {
    std::string w;
    for (int i = 0; i < L; ++i) w += letters[pick(rng)];
    for (int n = 1; n <= kMaxGramLength; ++n) {
      NormalizedText t{{w}, {w}};
      const auto grams = extract_ngrams(t, NgramRange(n, n), false);
      CHECK(static_cast<int>(grams.size()) == std::max(0, L + 3 - n));
    }
  }
}

TEST_CASE("build_models accumulates counts per label") {
  const auto set = build_models(labeled({{"aa", "A"}, {"bb", "B"}}), NgramRange(1, 1), 2.0);
  const auto& a = set.model("A");
  CHECK(a.count(" ", 1) == 2);
  CHECK(a.count("a", 1) == 2);
  CHECK(a.count("b", 1) == 0);
  CHECK(a.total(1) == 4);
  CHECK(a.table(1).counts().size() == 2);
  CHECK(set.languages() == std::vector<std::string>{"A", "B"});
}

TEST_CASE("penalty is pm * log(total)") {
  NgramModel m("x", NgramRange(2, 2), 2.15);
  m.add("ab", 2, 100);
  // log(100) = 4.605170185988091
  CHECK(m.penalty(2) == doctest::Approx(2.15 * 4.605170185988091).epsilon(1e-14));
  CHECK(m.relative_frequency("ab", 2) == 1.0);
  m.set_penalty_modifier(1.0);
  CHECK(m.penalty(2) == doctest::Approx(4.605170185988091).epsilon(1e-14));
}

TEST_CASE("build_models errors") {
  CHECK_THROWS_AS(build_models(labeled({{"aa", "A"}, {"123 !!", "B"}}), NgramRange(1, 2), 1.0),
                  DataError);
  Corpus c;
  c.docs.push_back({0, "abc", std::nullopt});
  CHECK_THROWS_AS(build_models(c, NgramRange(1, 2), 1.0), DataError);
  CHECK_THROWS_AS(build_models(labeled({{"aa", "A"}}), NgramRange(1, 2), 0.0),
                  std::invalid_argument);
}

TEST_CASE("add_document adds exactly the document's grams") {
  auto set = build_models(labeled({{"xy", "A"}, {"qq", "B"}}), NgramRange(2, 2), 2.0);
  const auto before = set.model("A").count("ab", 2);
  add_document(set, {5, "ab ab ab", std::nullopt}, "A");
  CHECK(set.model("A").count("ab", 2) == before + 3);
  CHECK(set.model("B").count("ab", 2) == 0);

  const auto snapshot = set;
  CHECK(add_document(set, {6, "12 !!", std::nullopt}, "A") == 0);
  CHECK(set == snapshot);

  CHECK_THROWS_AS(add_document(set, {7, "ab", std::nullopt}, "C"), DataError);
}

TEST_CASE("property: add_document equals rebuilding with the document appended") {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 50; ++iter) {
    Corpus train;
    for (int i = 0; i < 8; ++i) {
      train.docs.push_back({train.docs.size(), oracle::random_text(rng, "abcdeAB", 4) + " x",
                            i % 2 ? "p" : "q"});
    }
    const Document extra{99, oracle::random_text(rng, "abcde", 5), std::nullopt};
    auto incremental = build_models(train, NgramRange(1, 3), 1.7);
    add_document(incremental, extra, "q");

    auto appended = train;
    appended.docs.push_back({appended.docs.size(), extra.text, "q"});
    CHECK(incremental == build_models(appended, NgramRange(1, 3), 1.7));
  }
}

TEST_CASE("property: totals equal the number of extractable grams") {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 50; ++iter) {
    Corpus train;
    for (int i = 0; i < 6; ++i) {
      train.docs.push_back({train.docs.size(), oracle::random_text(rng, "abcXYZ", 5) + " k",
                            i % 3 == 0 ? "u" : "v"});
    }
    const NgramRange range(1, 4);
    const auto set = build_models(train, range, 1.0);
    for (const auto& m : set.models()) {
      std::map<int, std::uint64_t> expected;
      for (const auto& d : train.docs) {
        if (*d.label != m.language()) continue;
        for (const auto& w : oracle::ascii_words(d.text, true)) {
          const int L = static_cast<int>(w.size());
          for (int n = range.min_n; n <= range.max_n; ++n) expected[n] += std::max(0, L + 3 - n);
        }
      }
      for (int n = range.min_n; n <= range.max_n; ++n) {
        CHECK(m.total(n) == expected[n]);
        std::uint64_t sum = 0;
        for (const auto& [g, c] : m.table(n).counts()) {
          CHECK(c >= 1);
          sum += c;
        }
        CHECK(sum == m.total(n));
      }
    }
  }
}

TEST_CASE("property: duplicating the corpus k times keeps frequencies and adds pm*log(k)") {
  std::mt19937_64 rng(29);
  const double pm = 2.15;
  for (int k : {2, 3, 7}) {
    Corpus base;
    for (int i = 0; i < 10; ++i) {
      base.docs.push_back({base.docs.size(), oracle::random_text(rng, "abcdef", 5) + " z",
                           i % 2 ? "l1" : "l2"});
    }
    Corpus dup;
    for (int r = 0; r < k; ++r) {
      for (const auto& d : base.docs) dup.docs.push_back({dup.docs.size(), d.text, d.label});
    }
    const NgramRange range(1, 3);
    const auto a = build_models(base, range, pm);
    const auto b = build_models(dup, range, pm);
    for (const auto& ma : a.models()) {
      const auto& mb = b.model(ma.language());
      for (int n = range.min_n; n <= range.max_n; ++n) {
        for (const auto& [g, c] : ma.table(n).counts()) {
          CHECK(mb.relative_frequency(g, n) == doctest::Approx(ma.relative_frequency(g, n)));
        }
        CHECK(mb.penalty(n) - ma.penalty(n) == doctest::Approx(pm * std::log(k)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("ModelSet penalty modifier updates every model") {
  auto set = build_models(labeled({{"ab", "A"}, {"cd", "B"}}), NgramRange(1, 2), 1.0);
  const double p1 = set.model("A").penalty(2);
  set.set_penalty_modifier(2.0);
  CHECK(set.model("A").penalty(2) == doctest::Approx(2.0 * p1));
  CHECK(set.model("B").penalty_modifier() == 2.0);
}
