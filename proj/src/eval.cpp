#include "mixlid/eval.hpp"

#include "mixlid/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace mixlid {

EvalReport evaluate(const std::vector<Prediction>& preds, const Corpus& gold) {
  if (preds.size() != gold.docs.size()) {
    throw DataError("prediction count " + std::to_string(preds.size()) +
                    " does not match gold count " + std::to_string(gold.docs.size()));
  }
  std::unordered_map<std::size_t, const Prediction*> by_id;
  for (const auto& p : preds) {
    if (!by_id.emplace(p.doc_id, &p).second) {
      throw DataError("duplicate prediction for document " + std::to_string(p.doc_id));
    }
  }

  EvalReport r;
  std::map<std::string, std::size_t> tp, fp, fn;
  for (const auto& d : gold.docs) {
    if (!d.label) throw DataError("gold document " + std::to_string(d.id) + " has no label");
    auto it = by_id.find(d.id);
    if (it == by_id.end()) {
      throw DataError("no prediction for gold document " + std::to_string(d.id));
    }
    const auto& g = *d.label;
    const auto& p = it->second->best;
    ++r.confusion[{g, p}];
    ++r.per_class[g].support;
    if (g == p) {
      ++tp[g];
    } else {
      ++fn[g];
      ++fp[p];
    }
  }

  r.n = gold.docs.size();
  std::size_t correct = 0;
  double f1_sum = 0.0;
  for (auto& [label, m] : r.per_class) {
    const double t = static_cast<double>(tp[label]);
    const double pdenom = t + static_cast<double>(fp[label]);
    const double rdenom = t + static_cast<double>(fn[label]);
    m.precision = pdenom > 0 ? t / pdenom : 0.0;
    m.recall = rdenom > 0 ? t / rdenom : 0.0;
    m.f1 = (m.precision + m.recall) > 0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    f1_sum += m.f1;
    correct += tp[label];
  }
  if (!r.per_class.empty()) r.macro_f1 = f1_sum / static_cast<double>(r.per_class.size());
  if (r.n > 0) r.micro_f1 = static_cast<double>(correct) / static_cast<double>(r.n);
  return r;
}

namespace {

std::vector<std::string> report_labels(const EvalReport& report) {
  std::set<std::string> labels;
  for (const auto& [key, count] : report.confusion) {
    labels.insert(key.first);
    labels.insert(key.second);
  }
  return {labels.begin(), labels.end()};
}

std::size_t cell(const EvalReport& report, const std::string& g, const std::string& p) {
  auto it = report.confusion.find({g, p});
  return it == report.confusion.end() ? 0 : it->second;
}

}  // namespace

void write_report_tsv(std::ostream& out, const EvalReport& report) {
  out << "class\tprecision\trecall\tf1\tsupport\n";
  for (const auto& [label, m] : report.per_class) {
    out << label << '\t' << format_double(m.precision) << '\t' << format_double(m.recall)
        << '\t' << format_double(m.f1) << '\t' << m.support << '\n';
  }
  out << "macro_f1\t" << format_double(report.macro_f1) << '\n'
      << "micro_f1\t" << format_double(report.micro_f1) << '\n'
      << "n\t" << report.n << '\n';

  const auto labels = report_labels(report);
  out << "gold\\predicted";
  for (const auto& l : labels) out << '\t' << l;
  out << '\n';
  for (const auto& g : labels) {
    if (!report.per_class.count(g)) continue;
    out << g;
    for (const auto& p : labels) out << '\t' << cell(report, g, p);
    out << '\n';
  }
}

void write_report_table(std::ostream& out, const EvalReport& report) {
  std::size_t width = 9;
  for (const auto& [label, m] : report.per_class) width = std::max(width, label.size() + 2);

  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::fixed << std::setprecision(4);
  out << std::left << std::setw(static_cast<int>(width)) << "class" << std::right
      << std::setw(10) << "precision" << std::setw(10) << "recall" << std::setw(10) << "f1"
      << std::setw(10) << "support" << '\n';
  for (const auto& [label, m] : report.per_class) {
    out << std::left << std::setw(static_cast<int>(width)) << label << std::right
        << std::setw(10) << m.precision << std::setw(10) << m.recall << std::setw(10) << m.f1
        << std::setw(10) << m.support << '\n';
  }
  out << '\n'
      << "macro F1  " << report.macro_f1 << '\n'
      << "micro F1  " << report.micro_f1 << '\n'
      << "documents " << report.n << "\n\n";

  const auto labels = report_labels(report);
  std::size_t col = 7;
  for (const auto& l : labels) col = std::max(col, l.size() + 2);
  out << std::left << std::setw(static_cast<int>(width)) << "gold" << std::right;
  for (const auto& l : labels) out << std::setw(static_cast<int>(col)) << l;
  out << '\n';
  for (const auto& g : labels) {
    if (!report.per_class.count(g)) continue;
    out << std::left << std::setw(static_cast<int>(width)) << g << std::right;
    for (const auto& p : labels) out << std::setw(static_cast<int>(col)) << cell(report, g, p);
    out << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

namespace {

template <class Identifier>
std::vector<Prediction> identify_all(const Corpus& dev, Identifier identifier,
                                     const std::optional<AdaptConfig>& adapt) {
  AdaptConfig config;
  config.epochs = 0;
  if (adapt) config = *adapt;
  return adaptive_identify(dev, identifier, config);
}

HeliConfig heli_for_range(HeliConfig base, NgramRange range) {
  if (!base.lowercased_grams && !base.original_grams) {
    base.lowercased_grams = range;
    base.original_grams = range;
  } else {
    if (base.lowercased_grams) base.lowercased_grams = range;
    if (base.original_grams) base.original_grams = range;
  }
  return base;
}

std::vector<SweepRow> run_range(const Corpus& train, const Corpus& dev,
                                const SweepConfig& config, NgramRange range) {
  std::vector<SweepRow> rows;
  auto record = [&](std::optional<double> pm, const std::vector<Prediction>& preds) {
    const auto report = evaluate(preds, dev);
    rows.push_back({config.method, range, pm, report.macro_f1, report.micro_f1});
  };

  switch (config.method) {
    case Method::simple:
    case Method::sum_rf: {
      // pm does not affect these scorers; any positive value builds the models.
      auto models = build_models(train, range, 1.0, config.features);
      record(std::nullopt,
             identify_all(dev, NgramIdentifier(std::move(models), config.method), config.adapt));
      break;
    }
    case Method::nb: {
      auto models = build_models(train, range, config.pms.front(), config.features);
      for (const double pm : config.pms) {
        models.set_penalty_modifier(pm);
        record(pm, identify_all(dev, NgramIdentifier(models, Method::nb), config.adapt));
      }
      break;
    }
    case Method::heli: {
      auto heli = config.heli;
      heli.pm = config.pms.front();
      auto models = heli_build(train, heli_for_range(heli, range));
      for (const double pm : config.pms) {
        models.set_penalty_modifier(pm);
        record(pm, identify_all(dev, HeliIdentifier(models), config.adapt));
      }
      break;
    }
  }
  return rows;
}

}  // namespace

SweepResult sweep(const Corpus& train, const Corpus& dev, const SweepConfig& config) {
  if (config.ranges.empty()) throw std::invalid_argument("sweep grid has no ranges");
  const bool uses_pm = config.method == Method::nb || config.method == Method::heli;
  if (uses_pm && config.pms.empty()) {
    throw std::invalid_argument("sweep grid has no penalty modifiers");
  }

  std::vector<std::vector<SweepRow>> per_range(config.ranges.size());
  std::vector<std::exception_ptr> errors(config.ranges.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.ranges.size(); i = next++) {
      try {
        per_range[i] = run_range(train, dev, config, config.ranges[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  unsigned jobs = config.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                   : config.jobs;
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(config.ranges.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepResult result;
  for (auto& rows : per_range) result.insert(result.end(), rows.begin(), rows.end());
  std::stable_sort(result.begin(), result.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.macro_f1 != b.macro_f1) return a.macro_f1 > b.macro_f1;
    if (a.range != b.range) return a.range < b.range;
    return a.pm.value_or(0.0) < b.pm.value_or(0.0);
  });
  return result;
}

void write_sweep_tsv(std::ostream& out, const SweepResult& result) {
  out << "method\trange_min\trange_max\tpm\tmacro_f1\tmicro_f1\n";
  for (const auto& r : result) {
    out << method_name(r.method) << '\t' << r.range.min_n << '\t' << r.range.max_n << '\t'
        << (r.pm ? format_double(*r.pm) : std::string("-")) << '\t'
        << format_double(r.macro_f1) << '\t' << format_double(r.micro_f1) << '\n';
  }
}

namespace {

std::vector<std::string_view> split_commas(std::string_view spec) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const auto item = spec.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - start);
    if (item.empty()) throw std::invalid_argument("empty item in list '" + std::string(spec) + "'");
    items.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

}  // namespace

std::vector<NgramRange> parse_range_list(std::string_view spec) {
  std::vector<NgramRange> out;
  for (auto item : split_commas(spec)) {
    if (item.starts_with("all:")) {
      const auto outer = parse_range(item.substr(4));
      for (int lo = outer.min_n; lo <= outer.max_n; ++lo) {
        for (int hi = lo; hi <= outer.max_n; ++hi) out.emplace_back(lo, hi);
      }
    } else {
      out.push_back(parse_range(item));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> parse_pm_list(std::string_view spec) {
  std::vector<double> out;
  for (auto item : split_commas(spec)) {
    if (item.find(':') == std::string_view::npos) {
      out.push_back(parse_double(item));
      continue;
    }
    const auto c1 = item.find(':');
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string_view::npos) {
      throw std::invalid_argument("pm range must be start:stop:step");
    }
    const double start = parse_double(item.substr(0, c1));
    const double stop = parse_double(item.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_double(item.substr(c2 + 1));
    if (!(step > 0.0) || stop < start) throw std::invalid_argument("bad pm range");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
      // Rounded to 1e-9 so 2.1 + 4 * 0.01 prints as 2.14.
      out.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
    }
  }
  for (const double pm : out) {
    if (!(pm > 0.0)) throw std::invalid_argument("penalty modifiers must be positive");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace mixlid
