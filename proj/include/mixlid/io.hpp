#pragma once

#include "mixlid/heli.hpp"
#include "mixlid/ngram.hpp"
#include "mixlid/scorers.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace mixlid {

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);
/// Strict parse of a whole string; throws std::invalid_argument.
double parse_double(std::string_view text);

inline constexpr int kModelFormatVersion = 1;

// Gram model file (UTF-8 text):
//
//   #version 1
//   #range <min> <max>
//   #pm <value>
//   #log natural
//   #method <simple|sumrf|nb>        (optional, default nb)
//   #option <name> <0|1|words|concat> (only for non-default feature options)
//   language<TAB>length<TAB>gram<TAB>count   rows sorted by language, length, gram bytes
//   #end
//
// HeLI model file: `#model heli`, `#lnr`/`#onr` (<min> <max> or -), `#lw`,
// `#ow`, `#pm`, `#log natural`, optional `#penalty constant` and `#pad 0`,
// then rows language<TAB>kind<TAB>length<TAB>item<TAB>count with kind one of
// gramL, gramO, wordL, wordO (word rows have length 0), then `#end`.
//
// A missing `#end` line is reported as a truncated file.

void save_models(std::ostream& out, const ModelSet& models, Method method = Method::nb);
void save_heli_models(std::ostream& out, const HeliModelSet& models);

struct LoadedGramModel {
  ModelSet models;
  Method method = Method::nb;
};

/// A model file of either kind.
using AnyModel = std::variant<LoadedGramModel, HeliModelSet>;

AnyModel read_model(std::istream& in);
AnyModel load_model_file(const std::filesystem::path& path);
/// Throws DataError if the stream holds a HeLI model.
ModelSet load_models(std::istream& in);
HeliModelSet load_heli_models(std::istream& in);

void save_model_file(const std::filesystem::path& path, const AnyModel& model);

/// Prediction rows `doc_id<TAB>predicted_label<TAB>margin`, no header.
void write_predictions(std::ostream& out, const std::vector<Prediction>& preds);
std::vector<Prediction> read_predictions(std::istream& in);

}  // namespace mixlid
