#include "mixlid/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

namespace mixlid {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <class T>
T parse_uint(std::string_view s, const std::string& what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError(what + ": bad integer '" + std::string(s) + "'");
  }
  return v;
}

int parse_int_field(std::string_view s, const std::string& what) {
  return static_cast<int>(parse_uint<unsigned>(s, what));
}

// Line reader that tracks numbers and detects a missing final newline.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (in_.eof()) unterminated_ = true;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::string where() const { return "model line " + std::to_string(number_); }
  bool unterminated() const { return unterminated_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
  bool unterminated_ = false;
};

struct Header {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, std::string>> options;
};

// Reads `#key value` lines up to the first row. Returns the first row (or the
// `#end` line) in `first`.
Header read_header(LineReader& reader, std::optional<std::string>& first) {
  Header h;
  std::string line;
  bool have_version = false;
  while (reader.next(line)) {
    if (line.empty() || line[0] != '#' || line == "#end") {
      first = line;
      break;
    }
    const auto space = line.find(' ');
    const std::string key = line.substr(1, space == std::string::npos ? std::string::npos : space - 1);
    const std::string value = space == std::string::npos ? "" : line.substr(space + 1);
    if (!have_version) {
      if (key != "version") throw DataError(reader.where() + ": expected #version header");
      if (value != std::to_string(kModelFormatVersion)) {
        throw DataError(reader.where() + ": unsupported model version '" + value + "'");
      }
      have_version = true;
      continue;
    }
    if (key == "option") {
      const auto parts = split_spaces(value);
      if (parts.size() != 2) throw DataError(reader.where() + ": bad #option line");
      h.options.emplace_back(parts[0], parts[1]);
      continue;
    }
    if (h.values.count(key)) throw DataError(reader.where() + ": duplicate #" + key);
    h.values[key] = value;
  }
  if (!have_version) throw DataError("empty or truncated model file");
  if (auto it = h.values.find("log"); it == h.values.end() || it->second != "natural") {
    throw DataError("model file must declare '#log natural'");
  }
  return h;
}

const std::string& require(const Header& h, const std::string& key) {
  auto it = h.values.find(key);
  if (it == h.values.end()) throw DataError("model file lacks #" + key);
  return it->second;
}

double header_pm(const Header& h) {
  try {
    const double pm = parse_double(require(h, "pm"));
    if (!(pm > 0.0)) throw std::invalid_argument("non-positive");
    return pm;
  } catch (const std::invalid_argument&) {
    throw DataError("bad #pm value");
  }
}

bool parse_flag(const std::string& v, const std::string& what) {
  if (v == "1") return true;
  if (v == "0") return false;
  throw DataError("bad value for " + what + ": '" + v + "'");
}

std::optional<NgramRange> parse_header_range(const std::string& v, const std::string& what) {
  if (v == "-") return std::nullopt;
  const auto parts = split_spaces(v);
  if (parts.size() != 2) throw DataError("bad #" + what + " line");
  try {
    return NgramRange(parse_int_field(parts[0], what), parse_int_field(parts[1], what));
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

void finish(LineReader& reader, bool saw_end) {
  if (!saw_end || reader.unterminated()) throw DataError("truncated model file (no #end)");
  std::string line;
  while (reader.next(line)) {
    if (!line.empty()) throw DataError(reader.where() + ": data after #end");
  }
}

LoadedGramModel read_gram_rows(LineReader& reader, const Header& h,
                               std::optional<std::string> first) {
  const auto range_v = parse_header_range(require(h, "range"), "range");
  if (!range_v) throw DataError("#range cannot be '-'");
  FeatureOptions options;
  for (const auto& [name, value] : h.options) {
    if (name == "lowercase") {
      options.lowercase = parse_flag(value, name);
    } else if (name == "pad") {
      options.pad = parse_flag(value, name);
    } else if (name == "segmentation") {
      if (value == "words") {
        options.segmentation = Segmentation::words;
      } else if (value == "concat") {
        options.segmentation = Segmentation::concatenate;
      } else {
        throw DataError("bad segmentation option '" + value + "'");
      }
    } else {
      throw DataError("unknown option '" + name + "'");
    }
  }
  LoadedGramModel loaded{ModelSet(*range_v, header_pm(h), options), Method::nb};
  if (auto it = h.values.find("method"); it != h.values.end()) {
    try {
      loaded.method = parse_method(it->second);
    } catch (const std::invalid_argument& e) {
      throw DataError(e.what());
    }
    if (loaded.method == Method::heli) throw DataError("gram model file cannot declare heli");
  }

  std::set<std::tuple<std::string, int, std::string>> seen;
  if (!first) finish(reader, false);
  std::string line = std::move(*first);
  bool saw_end = false;
  do {
    if (line == "#end") {
      saw_end = true;
      break;
    }
    const auto f = split_tabs(line);
    if (f.size() != 4) throw DataError(reader.where() + ": expected 4 fields");
    const std::string lang(f[0]);
    const int length = parse_int_field(f[1], reader.where());
    const auto count = parse_uint<std::uint64_t>(f[3], reader.where());
    if (lang.empty()) throw DataError(reader.where() + ": empty language");
    if (!range_v->contains(length) || codepoint_count(f[2]) != static_cast<std::size_t>(length)) {
      throw DataError(reader.where() + ": gram length mismatch");
    }
    if (count == 0) throw DataError(reader.where() + ": zero count");
    if (!seen.emplace(lang, length, std::string(f[2])).second) {
      throw DataError(reader.where() + ": duplicate row");
    }
    if (loaded.models.index_of(lang) == ModelSet::npos) loaded.models.add_language(lang);
    loaded.models.model(lang).add(f[2], length, count);
  } while (reader.next(line));
  finish(reader, saw_end);
  return loaded;
}

HeliModelSet read_heli_rows(LineReader& reader, const Header& h,
                            std::optional<std::string> first) {
  HeliConfig config;
  config.lowercased_grams = parse_header_range(require(h, "lnr"), "lnr");
  config.original_grams = parse_header_range(require(h, "onr"), "onr");
  config.lowercased_words = parse_flag(require(h, "lw"), "lw");
  config.original_words = parse_flag(require(h, "ow"), "ow");
  config.pm = header_pm(h);
  if (auto it = h.values.find("penalty"); it != h.values.end()) {
    if (it->second == "constant") {
      config.penalty = HeliPenalty::constant;
    } else if (it->second != "relative") {
      throw DataError("bad #penalty value");
    }
  }
  if (auto it = h.values.find("pad"); it != h.values.end()) config.pad = parse_flag(it->second, "pad");
  HeliModelSet set;
  try {
    set = HeliModelSet(config);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }

  std::set<std::tuple<std::string, int, int, std::string>> seen;
  if (!first) finish(reader, false);
  std::string line = std::move(*first);
  bool saw_end = false;
  do {
    if (line == "#end") {
      saw_end = true;
      break;
    }
    const auto f = split_tabs(line);
    if (f.size() != 5) throw DataError(reader.where() + ": expected 5 fields");
    const std::string lang(f[0]);
    const auto kind = parse_heli_kind(f[1]);
    const int length = parse_int_field(f[2], reader.where());
    const auto count = parse_uint<std::uint64_t>(f[4], reader.where());
    const bool word = kind == HeliKind::word_original || kind == HeliKind::word_lowercased;
    const auto range =
        kind == HeliKind::gram_original ? config.original_grams : config.lowercased_grams;
    const bool ok = word ? length == 0
                         : (range && range->contains(length) &&
                            codepoint_count(f[3]) == static_cast<std::size_t>(length));
    if (!ok) throw DataError(reader.where() + ": length does not fit the sub-model");
    if (count == 0) throw DataError(reader.where() + ": zero count");
    if (!seen.emplace(lang, static_cast<int>(kind), length, std::string(f[3])).second) {
      throw DataError(reader.where() + ": duplicate row");
    }
    if (set.index_of(lang) == HeliModelSet::npos) set.add_language(lang);
    set.model(lang).add(kind, length, f[3], count);
  } while (reader.next(line));
  finish(reader, saw_end);
  return set;
}

template <class Row>
void write_sorted(std::ostream& out, std::vector<Row>& rows) {
  std::sort(rows.begin(), rows.end());
  for (const auto& r : rows) out << r.line;
}

struct GramRow {
  int length;
  std::string_view gram;
  std::string line;
  bool operator<(const GramRow& o) const {
    return std::tie(length, gram) < std::tie(o.length, o.gram);
  }
};

struct HeliRow {
  std::string_view kind;
  int length;
  std::string_view item;
  std::string line;
  bool operator<(const HeliRow& o) const {
    return std::tie(kind, length, item) < std::tie(o.kind, o.length, o.item);
  }
};

std::string range_field(const std::optional<NgramRange>& r) {
  return r ? std::to_string(r->min_n) + " " + std::to_string(r->max_n) : "-";
}

}  // namespace

void save_models(std::ostream& out, const ModelSet& models, Method method) {
  if (method == Method::heli) throw std::invalid_argument("use save_heli_models for heli");
  out << "#version " << kModelFormatVersion << '\n'
      << "#range " << models.range().min_n << ' ' << models.range().max_n << '\n'
      << "#pm " << format_double(models.penalty_modifier()) << '\n'
      << "#log natural\n"
      << "#method " << method_name(method) << '\n';
  const FeatureOptions defaults;
  const auto& o = models.options();
  if (o.lowercase != defaults.lowercase) out << "#option lowercase " << (o.lowercase ? 1 : 0) << '\n';
  if (o.pad != defaults.pad) out << "#option pad " << (o.pad ? 1 : 0) << '\n';
  if (o.segmentation != defaults.segmentation) out << "#option segmentation concat\n";

  // Models are already sorted by language code.
  for (const auto& m : models.models()) {
    std::vector<GramRow> rows;
    for (int n = models.range().min_n; n <= models.range().max_n; ++n) {
      for (const auto& [gram, count] : m.table(n).counts()) {
        rows.push_back({n, gram,
                        m.language() + '\t' + std::to_string(n) + '\t' + gram + '\t' +
                            std::to_string(count) + '\n'});
      }
    }
    write_sorted(out, rows);
  }
  out << "#end\n";
}

void save_heli_models(std::ostream& out, const HeliModelSet& models) {
  const auto& c = models.config();
  out << "#version " << kModelFormatVersion << '\n'
      << "#model heli\n"
      << "#lnr " << range_field(c.lowercased_grams) << '\n'
      << "#onr " << range_field(c.original_grams) << '\n'
      << "#lw " << (c.lowercased_words ? 1 : 0) << '\n'
      << "#ow " << (c.original_words ? 1 : 0) << '\n'
      << "#pm " << format_double(c.pm) << '\n'
      << "#log natural\n";
  if (c.penalty == HeliPenalty::constant) out << "#penalty constant\n";
  if (!c.pad) out << "#pad 0\n";

  for (const auto& m : models.models()) {
    std::vector<HeliRow> rows;
    auto emit = [&](HeliKind kind, int length) {
      for (const auto& [item, count] : m.table(kind, length).counts()) {
        rows.push_back({heli_kind_name(kind), length, item,
                        m.language() + '\t' + std::string(heli_kind_name(kind)) + '\t' +
                            std::to_string(length) + '\t' + item + '\t' +
                            std::to_string(count) + '\n'});
      }
    };
    emit(HeliKind::word_original, 0);
    emit(HeliKind::word_lowercased, 0);
    for (int n = 1; n <= kMaxGramLength; ++n) {
      emit(HeliKind::gram_original, n);
      emit(HeliKind::gram_lowercased, n);
    }
    write_sorted(out, rows);
  }
  out << "#end\n";
}

AnyModel read_model(std::istream& in) {
  LineReader reader(in);
  std::optional<std::string> first;
  const Header h = read_header(reader, first);
  if (auto it = h.values.find("model"); it != h.values.end()) {
    if (it->second != "heli") throw DataError("unknown model kind '" + it->second + "'");
    return read_heli_rows(reader, h, std::move(first));
  }
  return read_gram_rows(reader, h, std::move(first));
}

AnyModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return read_model(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

ModelSet load_models(std::istream& in) {
  auto any = read_model(in);
  if (auto* g = std::get_if<LoadedGramModel>(&any)) return std::move(g->models);
  throw DataError("expected a gram model file, found a HeLI model");
}

HeliModelSet load_heli_models(std::istream& in) {
  auto any = read_model(in);
  if (auto* h = std::get_if<HeliModelSet>(&any)) return std::move(*h);
  throw DataError("expected a HeLI model file");
}

void save_model_file(const std::filesystem::path& path, const AnyModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  if (const auto* g = std::get_if<LoadedGramModel>(&model)) {
    save_models(out, g->models, g->method);
  } else {
    save_heli_models(out, std::get<HeliModelSet>(model));
  }
  if (!out) throw DataError("write failed: " + path.string());
}

void write_predictions(std::ostream& out, const std::vector<Prediction>& preds) {
  for (const auto& p : preds) {
    out << p.doc_id << '\t' << p.best << '\t' << format_double(p.margin) << '\n';
  }
}

std::vector<Prediction> read_predictions(std::istream& in) {
  std::vector<Prediction> preds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto where = "prediction line " + std::to_string(line_no);
    const auto f = split_tabs(line);
    if (f.size() != 3) throw DataError(where + ": expected 3 fields");
    Prediction p;
    p.doc_id = parse_uint<std::size_t>(f[0], where);
    p.best = std::string(f[1]);
    try {
      p.margin = parse_double(f[2]);
    } catch (const std::invalid_argument&) {
      throw DataError(where + ": bad margin");
    }
    if (p.best.empty()) throw DataError(where + ": empty label");
    preds.push_back(std::move(p));
  }
  return preds;
}

}  // namespace mixlid
