#pragma once

#include "mixlid/adaptation.hpp"
#include "mixlid/corpus.hpp"
#include "mixlid/heli.hpp"
#include "mixlid/ngram.hpp"
#include "mixlid/scorers.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mixlid {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold documents of the class

  bool operator==(const ClassMetrics&) const = default;
};

struct EvalReport {
  /// (gold, predicted) -> count
  std::map<std::pair<std::string, std::string>, std::size_t> confusion;
  /// One entry per gold class.
  std::map<std::string, ClassMetrics> per_class;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  std::size_t n = 0;

  bool operator==(const EvalReport&) const = default;
};

/// Matches predictions to gold documents by id. Undefined ratios count as 0;
/// macro F1 averages over the classes present in gold. Throws DataError when
/// the ids do not match one-to-one or a gold document is unlabeled.
EvalReport evaluate(const std::vector<Prediction>& preds, const Corpus& gold);

/// Per-class rows, the averages, then the confusion matrix, all TSV.
void write_report_tsv(std::ostream& out, const EvalReport& report);
/// The same content as an aligned table.
void write_report_table(std::ostream& out, const EvalReport& report);

struct SweepRow {
  Method method = Method::nb;
  NgramRange range;
  std::optional<double> pm;  // unset for simple and sum_rf
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;

  bool operator==(const SweepRow&) const = default;
};

struct SweepConfig {
  Method method = Method::nb;
  std::vector<NgramRange> ranges;
  std::vector<double> pms;
  std::optional<AdaptConfig> adapt;
  FeatureOptions features;
  /// Domain flags and penalty style for heli; each range replaces whichever
  /// of its gram ranges are enabled.
  HeliConfig heli;
  /// Worker threads; 0 means hardware concurrency.
  unsigned jobs = 0;
};

using SweepResult = std::vector<SweepRow>;

/// One row per (range, pm) cell (per range for simple and sum_rf), sorted by
/// macro F1 descending then (range, pm) ascending. Throws std::invalid_argument
/// on an empty grid.
SweepResult sweep(const Corpus& train, const Corpus& dev, const SweepConfig& config);

/// Header `method range_min range_max pm macro_f1 micro_f1` then one row per
/// cell; pm is `-` when unused.
void write_sweep_tsv(std::ostream& out, const SweepResult& result);

/// Comma-separated items: `a-b` is one range, `all:a-b` every range inside.
std::vector<NgramRange> parse_range_list(std::string_view spec);
/// Comma-separated values or `start:stop:step` (inclusive).
std::vector<double> parse_pm_list(std::string_view spec);

}  // namespace mixlid
