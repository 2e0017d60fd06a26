#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mixlid {

/// Raised for malformed input data: unreadable files, bad rows, bad models.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One input line. `id` is the 0-based position in the file it came from and
/// is kept unchanged when a corpus is split.
struct Document {
  std::size_t id = 0;
  std::string text;
  std::optional<std::string> label;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::vector<Document> docs;

  std::set<std::string> label_set() const;
  std::size_t size() const { return docs.size(); }
  bool empty() const { return docs.empty(); }
  bool labeled() const;

  bool operator==(const Corpus&) const = default;
};

enum class TsvMode { labeled, unlabeled };

/// Reads `text<TAB>label` lines (labeled) or bare `text` lines (unlabeled).
/// Accepts `\n` and `\r\n`. Throws DataError naming the 1-based line number
/// for malformed rows and invalid UTF-8; an empty input is an error.
Corpus parse_tsv(std::istream& in, TsvMode mode);
Corpus load_tsv(const std::filesystem::path& path, TsvMode mode);

/// Writes the corpus in the format parse_tsv reads. Labels are written when
/// every document carries one.
void write_tsv(std::ostream& out, const Corpus& corpus);
void save_tsv(const std::filesystem::path& path, const Corpus& corpus);

/// How non-alphabetic characters are removed.
enum class Segmentation {
  words,        // non-alphabetic characters separate words
  concatenate,  // non-alphabetic characters are dropped; one word remains
};

struct NormalizedText {
  std::vector<std::string> words;
  std::vector<std::string> lowercased;

  bool operator==(const NormalizedText&) const = default;
};

/// Keeps maximal runs of Unicode Alphabetic characters. Invalid UTF-8
/// sequences act as separators.
NormalizedText normalize(std::string_view text,
                         Segmentation segmentation = Segmentation::words);

/// Full, locale-independent Unicode lowercase mapping.
std::string to_lower(std::string_view utf8);

/// True when `cp` has the Unicode Alphabetic property.
bool is_alphabetic(char32_t cp);

/// Number of code points in a valid UTF-8 string.
std::size_t codepoint_count(std::string_view utf8);

struct SplitResult {
  Corpus train;
  Corpus dev;
  std::vector<std::string> warnings;
};

/// Per-label ordered split: the first floor(fraction * n_label) documents of
/// each label go to `train`, the rest to `dev`. Input order is preserved and
/// nothing is shuffled.
SplitResult ordered_split(const Corpus& corpus, double train_fraction);

}  // namespace mixlid
