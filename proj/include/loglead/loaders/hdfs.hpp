#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>

#include "loglead/enhancers/aggregate.hpp"
#include "loglead/loaders/source.hpp"

namespace loglead {

/// First `blk_-?[0-9]+` substring of a message, if any.
inline std::optional<std::string_view> find_block_id(std::string_view message) {
  std::size_t pos = 0;
  while ((pos = message.find("blk_", pos)) != std::string_view::npos) {
    std::size_t end = pos + 4;
    if (end < message.size() && message[end] == '-') ++end;
    const std::size_t digits = end;
    while (end < message.size() && message[end] >= '0' && message[end] <= '9') ++end;
    if (end > digits) return message.substr(pos, end - pos);
    pos += 4;
  }
  return std::nullopt;
}

/// Reads a `BlockId,Label` (or `application,label`) CSV into a table with
/// seq_id and boolean label columns.
inline SequenceTable read_label_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  TextColumn ids;
  BoolColumn labels;
  bool first = true;
  for_each_line(text, [&](std::string_view line) {
    if (line.empty()) return;
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) throw IoError(path.string() + ": malformed label row: " + std::string(line));
    const auto key = line.substr(0, comma);
    const auto value = line.substr(comma + 1);
    if (first) {
      first = false;
      if (key == "BlockId" || key == "application") return;
    }
    ids.push_back(key);
    labels.push_back(label_is_anomaly(value));
  });
  return Table::from_columns({{std::string(col::seq_id), std::move(ids)},
                              {std::string(col::label), std::move(labels)}});
}

namespace detail {

// <YYMMDD> <HHMMSS> <pid> <LEVEL> <component>: <message>
class HdfsBuilder {
 public:
  explicit HdfsBuilder(std::size_t expected_rows) {
    date_.reserve(expected_rows, expected_rows * 6);
    time_.reserve(expected_rows, expected_rows * 6);
    level_.reserve(expected_rows, expected_rows * 4);
    component_.reserve(expected_rows, expected_rows * 24);
    message_.reserve(expected_rows, expected_rows * 96);
    seq_.reserve(expected_rows, expected_rows * 24);
    pid_.reserve(expected_rows);
    ts_.reserve(expected_rows);
  }

  bool try_add(std::string_view line) {
    std::string_view rest = line;
    auto date = next_field(rest);
    auto time = next_field(rest);
    auto pid_text = next_field(rest);
    auto level = next_field(rest);
    auto component = next_field(rest);
    if (!date || !time || !pid_text || !level || !component) return false;
    if (date->size() != 6 || time->size() != 6 || component->back() != ':') return false;
    auto yy = parse_digits(date->substr(0, 2)), mo = parse_digits(date->substr(2, 2)),
         dd = parse_digits(date->substr(4, 2));
    auto hh = parse_digits(time->substr(0, 2)), mi = parse_digits(time->substr(2, 2)),
         ss = parse_digits(time->substr(4, 2));
    auto pid = parse_int<std::int64_t>(*pid_text);
    if (!yy || !mo || !dd || !hh || !mi || !ss || !pid) return false;
    auto ts = make_timestamp(2000 + *yy, *mo, *dd, *hh, *mi, *ss);
    if (!ts) return false;

    date_.push_back(*date);
    time_.push_back(*time);
    pid_.push_back(*pid);
    level_.push_back(*level);
    component_.push_back(component->substr(0, component->size() - 1));
    message_.push_back(rest);
    ts_.push_back(*ts);
    if (auto blk = find_block_id(rest)) {
      seq_.push_back(*blk);
    } else {
      seq_.push_null();
    }
    return true;
  }

  std::size_t rows() const { return message_.size(); }

  // Block ids are taken from the first line of an event only.
  void append_continuation(std::string_view line) {
    message_.append_to_last("\n");
    message_.append_to_last(line);
  }

  Table finish() && {
    return Table::from_columns({{"date", std::move(date_)},
                                {"time", std::move(time_)},
                                {"pid", std::move(pid_)},
                                {"level", std::move(level_)},
                                {"component", std::move(component_)},
                                {std::string(col::message), std::move(message_)},
                                {std::string(col::timestamp), std::move(ts_)},
                                {std::string(col::seq_id), std::move(seq_)}});
  }

 private:
  TextColumn date_, time_, level_, component_, message_, seq_;
  Int64Column pid_;
  TimestampColumn ts_;
};

}  // namespace detail

/// Loads an HDFS log. Each event's seq_id is the first block id in its
/// message; the sequence table carries labels joined from `label_path`
/// (a `BlockId,Label` CSV) when given.
inline LoadResult load_hdfs(const std::filesystem::path& log_path,
                            const std::optional<std::filesystem::path>& label_path = std::nullopt) {
  LoadResult result;
  const std::string text = read_text_file(log_path, &result.diagnostics);
  detail::HdfsBuilder builder(text.size() / 140 + 1);
  feed_lines(text, builder, result.diagnostics);
  note_incomplete_lines(result.diagnostics, log_path.filename().string());
  result.events = std::move(builder).finish();

  std::optional<SequenceTable> labels;
  if (label_path) {
    labels = read_label_csv(*label_path);
  } else {
    result.diagnostics.warnings.push_back("no HDFS label file given; sequences are unlabeled");
  }
  result.sequences =
      aggregate_sequences(result.events, labels ? &*labels : nullptr, &result.diagnostics.warnings);
  return result;
}

}  // namespace loglead
