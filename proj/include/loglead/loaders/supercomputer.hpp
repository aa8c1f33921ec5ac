#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "loglead/loaders/source.hpp"

namespace loglead {

enum class SupercomputerFormat { bgl, thunderbird, spirit, liberty };

/// Field names preceding the free-text message, after the alert tag and epoch.
inline std::span<const std::string_view> supercomputer_fields(SupercomputerFormat f) {
  static constexpr std::array<std::string_view, 7> bgl = {"date", "node", "time", "node_repeat",
                                                          "type", "component", "level"};
  static constexpr std::array<std::string_view, 6> tbird = {"date", "admin", "month", "day", "time",
                                                            "location"};
  if (f == SupercomputerFormat::bgl) return bgl;
  return tbird;
}

namespace detail {

// Alert-prefixed layout shared by BGL, Thunderbird, Spirit and Liberty:
// <alert tag> <epoch> <fields...> <message...>
class SupercomputerBuilder {
 public:
  explicit SupercomputerBuilder(SupercomputerFormat format, std::size_t expected_rows)
      : names_(supercomputer_fields(format)), fields_(names_.size()) {
    alert_.reserve(expected_rows, expected_rows * 2);
    label_.reserve(expected_rows);
    epoch_.reserve(expected_rows);
    ts_.reserve(expected_rows);
    for (auto& f : fields_) f.reserve(expected_rows, expected_rows * 12);
    message_.reserve(expected_rows, expected_rows * 64);
  }

  bool try_add(std::string_view line) {
    std::string_view rest = line;
    auto tag = next_field(rest);
    auto epoch_text = next_field(rest);
    if (!tag || !epoch_text) return false;
    auto epoch = detail::parse_int<std::int64_t>(*epoch_text);
    if (!epoch) return false;
    std::array<std::string_view, 8> parsed{};
    for (std::size_t i = 0; i < names_.size(); ++i) {
      auto f = next_field(rest);
      if (!f) return false;
      parsed[i] = *f;
    }
    alert_.push_back(*tag);
    label_.push_back(*tag != "-");
    epoch_.push_back(*epoch);
    ts_.push_back(from_epoch_seconds(*epoch));
    for (std::size_t i = 0; i < names_.size(); ++i) fields_[i].push_back(parsed[i]);
    message_.push_back(rest);
    return true;
  }

  std::size_t rows() const { return message_.size(); }

  void append_continuation(std::string_view line) {
    message_.append_to_last("\n");
    message_.append_to_last(line);
  }

  Table finish() && {
    std::vector<std::pair<std::string, Column>> cols;
    cols.emplace_back("alert_tag", std::move(alert_));
    cols.emplace_back(std::string(col::label), std::move(label_));
    cols.emplace_back("epoch", std::move(epoch_));
    for (std::size_t i = 0; i < names_.size(); ++i) cols.emplace_back(std::string(names_[i]), std::move(fields_[i]));
    cols.emplace_back(std::string(col::message), std::move(message_));
    cols.emplace_back(std::string(col::timestamp), std::move(ts_));
    return Table::from_columns(std::move(cols));
  }

 private:
  std::span<const std::string_view> names_;
  TextColumn alert_;
  BoolColumn label_;
  Int64Column epoch_;
  std::vector<TextColumn> fields_;
  TextColumn message_;
  TimestampColumn ts_;
};

}  // namespace detail

/// Loads BGL / Thunderbird / Spirit / Liberty logs. The first token is the
/// alert tag: "-" is normal, anything else marks the line as an anomaly.
/// m_timestamp comes from the epoch field.
inline LoadResult load_supercomputer(const std::filesystem::path& path, SupercomputerFormat format) {
  LoadResult result;
  const std::string text = read_text_file(path, &result.diagnostics);
  detail::SupercomputerBuilder builder(format, text.size() / 128 + 1);
  feed_lines(text, builder, result.diagnostics);
  note_incomplete_lines(result.diagnostics, path.filename().string());
  result.events = std::move(builder).finish();
  return result;
}

}  // namespace loglead
