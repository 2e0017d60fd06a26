#include "mixlid/corpus.hpp"

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace mixlid {

namespace {

bool valid_utf8(std::string_view s) {
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  int32_t i = 0;
  const auto n = static_cast<int32_t>(s.size());
  while (i < n) {
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) return false;
  }
  return true;
}

bool is_line_break(UChar32 c) {
  return c == '\r' || c == '\v' || c == '\f' || c == 0x85 || c == 0x2028 ||
         c == 0x2029;
}

// Replaces embedded line-break characters other than the row terminator.
std::string strip_line_breaks(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  int32_t i = 0;
  const auto n = static_cast<int32_t>(s.size());
  while (i < n) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (is_line_break(c)) {
      out.push_back(' ');
    } else {
      out.append(s.substr(start, i - start));
    }
  }
  return out;
}

}  // namespace

std::set<std::string> Corpus::label_set() const {
  std::set<std::string> labels;
  for (const auto& d : docs) {
    if (d.label) labels.insert(*d.label);
  }
  return labels;
}

bool Corpus::labeled() const {
  for (const auto& d : docs) {
    if (!d.label) return false;
  }
  return true;
}

Corpus parse_tsv(std::istream& in, TsvMode mode) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!valid_utf8(line)) {
      throw DataError("line " + std::to_string(line_no) + ": invalid UTF-8");
    }
    Document doc;
    doc.id = corpus.docs.size();
    if (mode == TsvMode::labeled) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
        throw DataError("line " + std::to_string(line_no) +
                        ": expected 2 tab-separated fields (text, label)");
      }
      std::string label = line.substr(tab + 1);
      if (label.empty()) {
        throw DataError("line " + std::to_string(line_no) + ": empty label");
      }
      doc.text = strip_line_breaks(std::string_view(line).substr(0, tab));
      doc.label = std::move(label);
    } else {
      doc.text = strip_line_breaks(line);
    }
    corpus.docs.push_back(std::move(doc));
  }
  if (corpus.docs.empty()) throw DataError("empty corpus file");
  return corpus;
}

Corpus load_tsv(const std::filesystem::path& path, TsvMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return parse_tsv(in, mode);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_tsv(std::ostream& out, const Corpus& corpus) {
  const bool with_labels = corpus.labeled();
  for (const auto& d : corpus.docs) {
    out << d.text;
    if (with_labels) out << '\t' << *d.label;
    out << '\n';
  }
}

void save_tsv(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_tsv(out, corpus);
  if (!out) throw DataError("write failed: " + path.string());
}

bool is_alphabetic(char32_t cp) {
  return u_hasBinaryProperty(static_cast<UChar32>(cp), UCHAR_ALPHABETIC);
}

std::string to_lower(std::string_view utf8) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

std::size_t codepoint_count(std::string_view utf8) {
  std::size_t n = 0;
  for (char c : utf8) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

NormalizedText normalize(std::string_view text, Segmentation segmentation) {
  NormalizedText out;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    out.lowercased.push_back(to_lower(current));
    out.words.push_back(std::move(current));
    current.clear();
  };

  const auto* p = reinterpret_cast<const uint8_t*>(text.data());
  int32_t i = 0;
  const auto n = static_cast<int32_t>(text.size());
  while (i < n) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c >= 0 && u_hasBinaryProperty(c, UCHAR_ALPHABETIC)) {
      current.append(text.substr(start, i - start));
    } else if (segmentation == Segmentation::words) {
      flush();
    }
  }
  flush();
  return out;
}

SplitResult ordered_split(const Corpus& corpus, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train fraction must lie in (0, 1)");
  }
  std::map<std::string, std::size_t> per_label;
  for (const auto& d : corpus.docs) {
    if (!d.label) throw DataError("ordered_split needs a labeled corpus");
    ++per_label[*d.label];
  }

  // The epsilon absorbs representation error in products such as 0.29 * 100.
  std::map<std::string, std::size_t> quota;
  for (const auto& [label, n] : per_label) {
    quota[label] = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(n) + 1e-9));
  }

  SplitResult result;
  std::map<std::string, std::size_t> taken;
  for (const auto& d : corpus.docs) {
    auto& t = taken[*d.label];
    if (t < quota[*d.label]) {
      result.train.docs.push_back(d);
    } else {
      result.dev.docs.push_back(d);
    }
    ++t;
  }

  for (const auto& [label, n] : per_label) {
    const auto q = quota[label];
    if (q == 0) result.warnings.push_back("label '" + label + "' has no training documents");
    if (q == n) result.warnings.push_back("label '" + label + "' has no dev documents");
  }
  return result;
}

}  // namespace mixlid
