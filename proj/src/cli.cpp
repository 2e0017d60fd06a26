#include "mixlid/cli.hpp"

#include "mixlid/adaptation.hpp"
#include "mixlid/corpus.hpp"
#include "mixlid/eval.hpp"
#include "mixlid/heli.hpp"
#include "mixlid/io.hpp"
#include "mixlid/ngram.hpp"
#include "mixlid/scorers.hpp"
#include "mixlid/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

namespace mixlid::cli {

namespace {

// Bad flag values found after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FeatureFlags {
  bool no_lowercase = false;
  bool no_pad = false;
  bool concatenate = false;

  void add_to(CLI::App* app) {
    app->add_flag("--no-lowercase", no_lowercase, "Keep original casing in gram models");
    app->add_flag("--no-pad", no_pad, "Do not pad words with spaces");
    app->add_flag("--concatenate", concatenate,
                  "Drop non-alphabetic characters without splitting words");
  }

  FeatureOptions options() const {
    FeatureOptions o;
    o.lowercase = !no_lowercase;
    o.pad = !no_pad;
    o.segmentation = concatenate ? Segmentation::concatenate : Segmentation::words;
    return o;
  }
};

struct HeliFlags {
  std::string lnr = "2-6";
  std::string onr = "2-6";
  std::string lw = "y";
  std::string ow = "y";
  bool constant_penalty = false;

  void add_to(CLI::App* app) {
    app->add_option("--lnr", lnr, "heli: lowercased gram range, or -")->capture_default_str();
    app->add_option("--onr", onr, "heli: original-case gram range, or -")->capture_default_str();
    app->add_option("--lw", lw, "heli: use lowercased words (y|n)")->capture_default_str();
    app->add_option("--ow", ow, "heli: use original words (y|n)")->capture_default_str();
    app->add_flag("--constant-penalty", constant_penalty,
                  "heli: penalty is pm itself instead of pm * log(total)");
  }

  HeliConfig config(double pm) const {
    auto yes_no = [](const std::string& v, const char* name) {
      if (v == "y" || v == "yes" || v == "1") return true;
      if (v == "n" || v == "no" || v == "0") return false;
      throw UsageError(std::string("--") + name + " expects y or n");
    };
    auto range = [](const std::string& v) -> std::optional<NgramRange> {
      if (v == "-") return std::nullopt;
      try {
        return parse_range(v);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    };
    HeliConfig c;
    c.lowercased_grams = range(lnr);
    c.original_grams = range(onr);
    c.lowercased_words = yes_no(lw, "lw");
    c.original_words = yes_no(ow, "ow");
    c.pm = pm;
    c.penalty = constant_penalty ? HeliPenalty::constant : HeliPenalty::relative;
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

struct AdaptFlags {
  std::string k;
  std::optional<double> ct;
  std::optional<int> epochs;
  bool incremental = false;

  void add_to(CLI::App* app, const std::string& default_k) {
    k = default_k;
    app->add_option("--adapt-k", k, "Adaptation splits (integer or 'full')")
        ->capture_default_str();
    app->add_option("--ct", ct, "Confidence threshold; margins at or below it are not adopted");
    app->add_option("--epochs", epochs, "Adaptation epochs (0 disables adaptation)");
    app->add_flag("--incremental", incremental,
                  "Re-score only languages whose models changed (same output)");
  }

  AdaptConfig config(bool adapt_by_default, CLI::App* app) const {
    AdaptConfig c;
    if (k == "full" || k == "max") {
      c.k = AdaptConfig::kFull;
    } else {
      try {
        std::size_t pos = 0;
        const long v = std::stol(k, &pos);
        if (pos != k.size() || v < 1) throw std::invalid_argument(k);
        c.k = static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        throw UsageError("--adapt-k expects a positive integer or 'full'");
      }
    }
    c.ct = ct;
    const bool requested = app->count("--adapt-k") > 0 || ct.has_value();
    c.epochs = epochs.value_or((adapt_by_default || requested) ? 1 : 0);
    c.incremental = incremental;
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

Method method_flag(const std::string& name) {
  try {
    return parse_method(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

template <class Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  fn(out);
  out.flush();
  if (!out) throw DataError("write failed: " + path);
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

std::vector<Prediction> identify_with(const AnyModel& model, std::optional<Method> method_override,
                                      const Corpus& docs, const AdaptConfig& adapt,
                                      std::vector<AdoptionEvent>* trace) {
  if (const auto* g = std::get_if<LoadedGramModel>(&model)) {
    const Method method = method_override.value_or(g->method);
    if (method == Method::heli) throw UsageError("a gram model cannot be used with --method heli");
    NgramIdentifier identifier(g->models, method);
    return adaptive_identify(docs, identifier, adapt, trace);
  }
  if (method_override && *method_override != Method::heli) {
    throw UsageError("a HeLI model can only be used with --method heli");
  }
  HeliIdentifier identifier(std::get<HeliModelSet>(model));
  return adaptive_identify(docs, identifier, adapt, trace);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Language identification for short code-mixed texts with character n-gram models",
               "mixlid"};
  app.require_subcommand(1);
  unsigned jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (0 = all cores)");

  // split
  auto* split = app.add_subcommand("split", "Ordered per-label train/dev split");
  std::string split_in, split_train, split_dev;
  double fraction = 0.9;
  split->add_option("--in", split_in, "Labeled TSV")->required();
  split->add_option("--fraction", fraction, "Training fraction per label")->capture_default_str();
  split->add_option("--train", split_train, "Output training TSV")->required();
  split->add_option("--dev", split_dev, "Output dev TSV")->required();

  // train
  auto* train = app.add_subcommand("train", "Build language models from labeled TSV");
  std::string train_in, train_method = "nb", train_model;
  int min_n = 2, max_n = 6;
  std::optional<double> train_pm;
  FeatureFlags train_features;
  HeliFlags train_heli;
  train->add_option("--in", train_in, "Labeled TSV")->required();
  train->add_option("--method", train_method, "nb | simple | sumrf | heli")->capture_default_str();
  train->add_option("--min-n", min_n, "Shortest gram")->capture_default_str();
  train->add_option("--max-n", max_n, "Longest gram")->capture_default_str();
  train->add_option("--pm", train_pm, "Penalty modifier (default 2.15, heli 1.11)");
  train->add_option("--model", train_model, "Output model file")->required();
  train_features.add_to(train);
  train_heli.add_to(train);

  // identify
  auto* identify = app.add_subcommand("identify", "Identify the language of each input line");
  std::string id_model, id_in, id_out, id_trace, id_method;
  bool id_labeled = false;
  AdaptFlags id_adapt;
  identify->add_option("--model", id_model, "Model file")->required();
  identify->add_option("--in", id_in, "Input lines")->required();
  identify->add_option("--out", id_out, "Output predictions TSV")->required();
  identify->add_flag("--labeled", id_labeled, "Input is text<TAB>label; labels are ignored");
  identify->add_option("--method", id_method, "Override the scorer stored in a gram model");
  identify->add_option("--trace", id_trace, "Adoption trace TSV");
  id_adapt.add_to(identify, "20");

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against gold labels");
  std::string ev_pred, ev_gold, ev_report;
  evaluate_cmd->add_option("--pred", ev_pred, "Predictions TSV")->required();
  evaluate_cmd->add_option("--gold", ev_gold, "Labeled TSV")->required();
  evaluate_cmd->add_option("--report", ev_report, "Write the report as TSV");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid search over gram ranges and penalty modifiers");
  std::string sw_train, sw_dev, sw_method = "nb", sw_ranges, sw_pms, sw_out;
  FeatureFlags sw_features;
  HeliFlags sw_heli;
  AdaptFlags sw_adapt;
  sweep_cmd->add_option("--train", sw_train, "Labeled training TSV")->required();
  sweep_cmd->add_option("--dev", sw_dev, "Labeled dev TSV")->required();
  sweep_cmd->add_option("--method", sw_method, "nb | simple | sumrf | heli")->capture_default_str();
  sweep_cmd->add_option("--ranges", sw_ranges, "e.g. 2-6,1-5 or all:1-10")->required();
  sweep_cmd->add_option("--pms", sw_pms, "e.g. 2.15 or 2.10:2.20:0.01");
  sweep_cmd->add_option("--out", sw_out, "Output sweep TSV")->required();
  sw_features.add_to(sweep_cmd);
  sw_heli.add_to(sweep_cmd);
  sw_adapt.add_to(sweep_cmd, "20");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
  std::string sy_spec, sy_out, sy_preset;
  std::size_t sy_lines = 1000;
  std::uint64_t sy_seed = 1;
  synth->add_option("--spec", sy_spec, "JSON corpus spec");
  synth->add_option("--preset", sy_preset, "disjoint | overlap | four (instead of --spec)");
  synth->add_option("--lines", sy_lines, "Lines per language for --preset")->capture_default_str();
  synth->add_option("--seed", sy_seed, "Seed for --preset")->capture_default_str();
  synth->add_option("--out", sy_out, "Output TSV")->required();

  // system1
  auto* system1 = app.add_subcommand(
      "system1", "Train nb 2-6, pm 2.15 and identify with one epoch of adaptation");
  std::string s1_train, s1_test, s1_out, s1_trace;
  std::size_t s1_k = 20;
  bool s1_labeled = false;
  system1->add_option("--train", s1_train, "Labeled training TSV")->required();
  system1->add_option("--test", s1_test, "Test lines")->required();
  system1->add_option("--out", s1_out, "Output predictions TSV")->required();
  system1->add_option("--adapt-k", s1_k, "Adaptation splits")->capture_default_str();
  system1->add_flag("--labeled", s1_labeled, "Test file is text<TAB>label; labels are ignored");
  system1->add_option("--trace", s1_trace, "Adoption trace TSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*split) {
      if (!(fraction > 0.0 && fraction < 1.0)) throw UsageError("--fraction must lie in (0, 1)");
      const auto corpus = load_tsv(split_in, TsvMode::labeled);
      const auto result = ordered_split(corpus, fraction);
      report_warnings(result.warnings, err);
      save_tsv(split_train, result.train);
      save_tsv(split_dev, result.dev);
      return kExitOk;
    }

    if (*train) {
      const Method method = method_flag(train_method);
      NgramRange range;
      try {
        range = NgramRange(min_n, max_n);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const double pm = train_pm.value_or(method == Method::heli ? 1.11 : 2.15);
      if (!(pm > 0.0)) throw UsageError("--pm must be positive");
      const HeliConfig heli = method == Method::heli ? train_heli.config(pm) : HeliConfig{};
      const auto corpus = load_tsv(train_in, TsvMode::labeled);
      if (method == Method::heli) {
        save_model_file(train_model, heli_build(corpus, heli));
      } else {
        save_model_file(train_model, LoadedGramModel{
                                         build_models(corpus, range, pm, train_features.options()),
                                         method});
      }
      return kExitOk;
    }

    if (*identify) {
      std::optional<Method> method;
      if (!id_method.empty()) method = method_flag(id_method);
      const auto adapt = id_adapt.config(false, identify);
      const auto model = load_model_file(id_model);
      const auto docs = load_tsv(id_in, id_labeled ? TsvMode::labeled : TsvMode::unlabeled);
      std::vector<AdoptionEvent> trace;
      const auto preds = identify_with(model, method, docs, adapt, id_trace.empty() ? nullptr : &trace);
      write_file(id_out, [&](std::ostream& o) { write_predictions(o, preds); });
      if (!id_trace.empty()) write_file(id_trace, [&](std::ostream& o) { write_trace(o, trace); });
      return kExitOk;
    }

    if (*evaluate_cmd) {
      std::ifstream pin(ev_pred, std::ios::binary);
      if (!pin) throw DataError("cannot open " + ev_pred);
      const auto preds = read_predictions(pin);
      const auto gold = load_tsv(ev_gold, TsvMode::labeled);
      const auto report = evaluate(preds, gold);
      write_report_table(out, report);
      if (!ev_report.empty()) {
        write_file(ev_report, [&](std::ostream& o) { write_report_tsv(o, report); });
      }
      return kExitOk;
    }

    if (*sweep_cmd) {
      SweepConfig config;
      config.method = method_flag(sw_method);
      try {
        config.ranges = parse_range_list(sw_ranges);
        if (!sw_pms.empty()) config.pms = parse_pm_list(sw_pms);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if ((config.method == Method::nb || config.method == Method::heli) && config.pms.empty()) {
        throw UsageError("--pms is required for nb and heli");
      }
      config.features = sw_features.options();
      if (config.method == Method::heli) config.heli = sw_heli.config(config.pms.front());
      const auto adapt = sw_adapt.config(false, sweep_cmd);
      if (adapt.epochs > 0) config.adapt = adapt;
      config.jobs = jobs;
      const auto trainc = load_tsv(sw_train, TsvMode::labeled);
      const auto devc = load_tsv(sw_dev, TsvMode::labeled);
      const auto result = sweep(trainc, devc, config);
      write_file(sw_out, [&](std::ostream& o) { write_sweep_tsv(o, result); });
      return kExitOk;
    }

    if (*synth) {
      if (sy_spec.empty() == sy_preset.empty()) {
        throw UsageError("give exactly one of --spec or --preset");
      }
      SynthSpec spec;
      if (!sy_spec.empty()) {
        try {
          spec = load_synth_spec(sy_spec);
        } catch (const std::invalid_argument& e) {
          throw DataError(e.what());
        }
      } else if (sy_preset == "disjoint") {
        spec = disjoint_two_language_spec(sy_lines, sy_seed);
      } else if (sy_preset == "overlap") {
        spec = overlapping_mixed_spec(sy_lines, sy_seed);
      } else if (sy_preset == "four") {
        spec = four_language_spec(sy_lines, sy_seed);
      } else {
        throw UsageError("unknown preset '" + sy_preset + "'");
      }
      save_tsv(sy_out, generate(std::move(spec)));
      return kExitOk;
    }

    if (*system1) {
      if (s1_k < 1) throw UsageError("--adapt-k must be >= 1");
      const auto trainc = load_tsv(s1_train, TsvMode::labeled);
      const auto test = load_tsv(s1_test, s1_labeled ? TsvMode::labeled : TsvMode::unlabeled);
      NgramIdentifier identifier(build_models(trainc, NgramRange(2, 6), 2.15), Method::nb);
      AdaptConfig adapt;
      adapt.k = s1_k;
      adapt.epochs = 1;
      std::vector<AdoptionEvent> trace;
      const auto preds =
          adaptive_identify(test, identifier, adapt, s1_trace.empty() ? nullptr : &trace);
      write_file(s1_out, [&](std::ostream& o) { write_predictions(o, preds); });
      if (!s1_trace.empty()) write_file(s1_trace, [&](std::ostream& o) { write_trace(o, trace); });
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace mixlid::cli
