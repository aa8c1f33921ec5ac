#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "loglead/core/error.hpp"
#include "loglead/enhancers/masking.hpp"
#include "loglead/enhancers/parse.hpp"
#include "loglead/loaders/loader.hpp"

namespace loglead {

/// Timing of one phase on one dataset. Times are wall-clock seconds.
struct BenchRow {
  std::string dataset;
  std::uint64_t line_count = 0;
  std::string phase;
  std::vector<double> seconds;  // one per repeat, in run order

  std::size_t repeats() const { return seconds.size(); }

  double median() const {
    std::vector<double> s = seconds;
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    return n % 2 == 1 ? s[n / 2] : (s[n / 2 - 1] + s[n / 2]) / 2.0;
  }
  double min() const { return *std::min_element(seconds.begin(), seconds.end()); }
  double max() const { return *std::max_element(seconds.begin(), seconds.end()); }
  double lines_per_second() const { return static_cast<double>(line_count) / median(); }
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<std::string> notices;  // skipped datasets and the like

  const BenchRow* find(std::string_view dataset, std::string_view phase) const {
    for (const auto& r : rows)
      if (r.dataset == dataset && r.phase == phase) return &r;
    return nullptr;
  }

  void write_csv(std::ostream& os) const {
    os << "dataset,lines,phase,repeats,median_s,min_s,max_s,lines_per_s\n";
    std::ostringstream line;
    for (const auto& r : rows) {
      line.str({});
      line.precision(6);
      line << r.dataset << ',' << r.line_count << ',' << r.phase << ',' << r.repeats() << ',' << std::fixed
           << r.median() << ',' << r.min() << ',' << r.max() << ',' << std::setprecision(0) << r.lines_per_second();
      os << line.str() << '\n';
    }
  }

  void write_csv_file(const std::filesystem::path& path) const {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path.string());
    write_csv(os);
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      arr.push_back({{"dataset", r.dataset},
                     {"lines", r.line_count},
                     {"phase", r.phase},
                     {"repeats", r.repeats()},
                     {"seconds", r.seconds},
                     {"median_s", r.median()},
                     {"min_s", r.min()}});
    }
    return {{"rows", std::move(arr)}, {"notices", notices}};
  }
};

using BenchClock = std::chrono::steady_clock;

inline double seconds_since(BenchClock::time_point start) {
  return std::chrono::duration<double>(BenchClock::now() - start).count();
}

/// Runs fn `repeats` times back to back and returns each wall-clock time.
template <class Fn>
std::vector<double> time_repeats(int repeats, Fn&& fn) {
  if (repeats < 1) throw std::invalid_argument("bench: repeats must be >= 1");
  std::vector<double> out;
  for (int i = 0; i < repeats; ++i) {
    const auto start = BenchClock::now();
    fn();
    out.push_back(seconds_since(start));
  }
  return out;
}

struct NamedLoaderSpec {
  std::string dataset;
  LoaderSpec spec;
};

/// Times file-to-table loading. The measured phase is the whole load()
/// call: reading, decoding, splitting and building columns. A dataset whose
/// log path does not exist is skipped with a notice.
inline BenchReport bench_loading(const std::vector<NamedLoaderSpec>& datasets, int repeats) {
  BenchReport report;
  for (const auto& d : datasets) {
    if (!std::filesystem::exists(d.spec.log_path)) {
      report.notices.push_back("skipped " + d.dataset + ": " + d.spec.log_path.string() + " not found");
      continue;
    }
    std::uint64_t lines = 0;
    auto times = time_repeats(repeats, [&] {
      const LoadResult r = load(d.spec);
      lines = r.events.num_rows();
    });
    if (lines == 0) {
      report.notices.push_back("skipped " + d.dataset + ": no lines loaded");
      continue;
    }
    report.rows.push_back({d.dataset, lines, "load", std::move(times)});
  }
  return report;
}

enum class MaskingMode { pipeline, parser_internal };

inline std::string_view to_string(MaskingMode m) { return m == MaskingMode::pipeline ? "pipeline" : "parser_internal"; }

inline MaskingMode parse_masking_mode(std::string_view s) {
  if (s == "pipeline") return MaskingMode::pipeline;
  if (s == "parser_internal") return MaskingMode::parser_internal;
  throw ConfigError("unknown masking mode '" + std::string(s) + "'");
}

namespace detail {

template <class Parser>
Int64Column run_parser(const TextColumn& messages, const InlineMasker* masker) {
  Parser p;
  return parse_column(p, messages, masker);
}

inline Int64Column run_parser(ParserKind kind, const TextColumn& messages, const InlineMasker* masker) {
  switch (kind) {
    case ParserKind::drain: return run_parser<DrainParser>(messages, masker);
    case ParserKind::spell: return run_parser<SpellParser>(messages, masker);
    case ParserKind::lenma: return run_parser<LenmaParser>(messages, masker);
  }
  throw std::invalid_argument("unknown parser");
}

}  // namespace detail

/// Times each parser over the same message column.
///
/// pipeline: rows "<parser>/pipeline/mask" (normalize over the column),
/// "<parser>/pipeline/parse" (parsing the pre-masked column) and
/// "<parser>/pipeline/total" (their per-repeat sum).
/// parser_internal: row "<parser>/parser_internal/total", masking each
/// message inside the parse loop.
inline BenchReport bench_parsers(const std::string& dataset, const TextColumn& messages,
                                 const std::vector<ParserKind>& parsers, MaskingMode mode, const MaskingRules& rules,
                                 int repeats) {
  if (repeats < 1) throw std::invalid_argument("bench: repeats must be >= 1");
  BenchReport report;
  const std::uint64_t lines = messages.size();
  for (ParserKind kind : parsers) {
    const std::string prefix = std::string(to_string(kind)) + "/" + std::string(to_string(mode));
    if (mode == MaskingMode::pipeline) {
      BenchRow mask{dataset, lines, prefix + "/mask", {}}, parse{dataset, lines, prefix + "/parse", {}},
          total{dataset, lines, prefix + "/total", {}};
      for (int i = 0; i < repeats; ++i) {
        auto start = BenchClock::now();
        const TextColumn masked = normalize(messages, rules);
        mask.seconds.push_back(seconds_since(start));
        start = BenchClock::now();
        const Int64Column ids = detail::run_parser(kind, masked, nullptr);
        parse.seconds.push_back(seconds_since(start));
        total.seconds.push_back(mask.seconds.back() + parse.seconds.back());
      }
      report.rows.push_back(std::move(mask));
      report.rows.push_back(std::move(parse));
      report.rows.push_back(std::move(total));
    } else {
      const InlineMasker masker(rules);
      auto times = time_repeats(repeats, [&] { detail::run_parser(kind, messages, &masker); });
      report.rows.push_back({dataset, lines, prefix + "/total", std::move(times)});
    }
  }
  return report;
}

inline void append(BenchReport& into, BenchReport from) {
  for (auto& r : from.rows) into.rows.push_back(std::move(r));
  for (auto& n : from.notices) into.notices.push_back(std::move(n));
}

}  // namespace loglead
