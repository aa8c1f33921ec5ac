#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "loglead/core/parallel.hpp"
#include "loglead/enhancers/aggregate.hpp"
#include "loglead/loaders/hdfs.hpp"
#include "loglead/loaders/source.hpp"

namespace loglead {

namespace detail {

// YYYY-MM-DD HH:MM:SS,mmm LEVEL [thread] class: message
// The [thread] part is optional; lines not matching the prefix are
// continuation lines (stack traces).
class HadoopBuilder {
 public:
  bool try_add(std::string_view line) {
    std::string_view rest = line;
    auto date = next_field(rest);
    auto time = next_field(rest);
    auto level = next_field(rest);
    if (!date || !time || !level) return false;
    if (date->size() != 10 || (*date)[4] != '-' || (*date)[7] != '-') return false;
    if (time->size() != 12 || (*time)[2] != ':' || (*time)[5] != ':' || (*time)[8] != ',') return false;
    auto y = parse_digits(date->substr(0, 4)), mo = parse_digits(date->substr(5, 2)),
         d = parse_digits(date->substr(8, 2));
    auto h = parse_digits(time->substr(0, 2)), mi = parse_digits(time->substr(3, 2)),
         s = parse_digits(time->substr(6, 2)), ms = parse_digits(time->substr(9, 3));
    if (!y || !mo || !d || !h || !mi || !s || !ms) return false;
    auto ts = make_timestamp(*y, *mo, *d, *h, *mi, *s, *ms * 1000);
    if (!ts) return false;

    std::string_view thread;
    if (!rest.empty() && rest.front() == '[') {
      const std::size_t close = rest.find(']');
      if (close == std::string_view::npos) return false;
      thread = rest.substr(1, close - 1);
      rest.remove_prefix(close + 1);
      if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    }
    std::string_view component;
    const std::size_t colon = rest.find(": ");
    if (colon != std::string_view::npos && rest.substr(0, colon).find(' ') == std::string_view::npos) {
      component = rest.substr(0, colon);
      rest.remove_prefix(colon + 2);
    }

    date_.push_back(*date);
    time_.push_back(*time);
    level_.push_back(*level);
    thread_.push_back(thread);
    component_.push_back(component);
    message_.push_back(rest);
    ts_.push_back(*ts);
    return true;
  }

  std::size_t rows() const { return message_.size(); }

  void append_continuation(std::string_view line) {
    message_.append_to_last("\n");
    message_.append_to_last(line);
  }

  void append(const HadoopBuilder& o) {
    date_.append(o.date_);
    time_.append(o.time_);
    level_.append(o.level_);
    thread_.append(o.thread_);
    component_.append(o.component_);
    message_.append(o.message_);
    ts_.append(o.ts_);
  }

  TextColumn date_, time_, level_, thread_, component_, message_;
  TimestampColumn ts_;
};

}  // namespace detail

/// application name -> is anomaly
using ApplicationLabels = std::map<std::string, bool>;

inline ApplicationLabels read_application_labels(const std::filesystem::path& path) {
  const SequenceTable t = read_label_csv(path);
  const auto& ids = t.get<TextColumn>(col::seq_id);
  const auto& lab = t.get<BoolColumn>(col::label);
  ApplicationLabels out;
  for (std::size_t i = 0; i < ids.size(); ++i) out[std::string(ids[i])] = lab[i];
  return out;
}

/// Loads a `<root>/<application>/<container>.log` tree. seq_id is the
/// application folder name. Files are parsed in parallel and concatenated
/// in (application, file name) order.
inline LoadResult load_hadoop(const std::filesystem::path& root, const ApplicationLabels& app_labels) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw IoError("hadoop loader needs a directory: " + root.string());

  struct FileJob {
    std::string application;
    fs::path path;
  };
  std::vector<FileJob> jobs;
  std::vector<fs::path> apps;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) apps.push_back(entry.path());
  std::sort(apps.begin(), apps.end());
  for (const auto& app : apps) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(app))
      if (entry.is_regular_file() && entry.path().extension() == ".log") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (auto& f : files) jobs.push_back({app.filename().string(), std::move(f)});
  }

  LoadResult result;
  std::vector<detail::HadoopBuilder> parts(jobs.size());
  std::vector<LoadDiagnostics> diags(jobs.size());
  parallel_for_index(jobs.size(), [&](std::size_t i) {
    const std::string text = read_text_file(jobs[i].path, &diags[i]);
    feed_lines(text, parts[i], diags[i]);
    note_incomplete_lines(diags[i], jobs[i].application + "/" + jobs[i].path.filename().string());
  });

  detail::HadoopBuilder merged;
  TextColumn seq;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    merged.append(parts[i]);
    for (std::size_t r = 0; r < parts[i].rows(); ++r) seq.push_back(jobs[i].application);
    result.diagnostics.absorb(diags[i]);
  }
  if (jobs.empty()) result.diagnostics.warnings.push_back(root.string() + ": no log files found");

  result.events = Table::from_columns({{"date", std::move(merged.date_)},
                                       {"time", std::move(merged.time_)},
                                       {"level", std::move(merged.level_)},
                                       {"thread", std::move(merged.thread_)},
                                       {"component", std::move(merged.component_)},
                                       {std::string(col::message), std::move(merged.message_)},
                                       {std::string(col::timestamp), std::move(merged.ts_)},
                                       {std::string(col::seq_id), std::move(seq)}});

  TextColumn label_ids;
  BoolColumn label_vals;
  for (const auto& [app, anomalous] : app_labels) {
    label_ids.push_back(app);
    label_vals.push_back(anomalous);
  }
  const SequenceTable labels = Table::from_columns(
      {{std::string(col::seq_id), std::move(label_ids)}, {std::string(col::label), std::move(label_vals)}});
  result.sequences = aggregate_sequences(result.events, &labels, &result.diagnostics.warnings);
  return result;
}

inline LoadResult load_hadoop(const std::filesystem::path& root, const std::filesystem::path& label_path) {
  return load_hadoop(root, read_application_labels(label_path));
}

}  // namespace loglead
