#pragma once

#include <filesystem>

#include "loglead/loaders/source.hpp"

namespace loglead {

/// General-purpose loader: one row per line, no field splitting. Every row
/// gets the load-time wall clock as a placeholder m_timestamp.
inline LoadResult load_raw(const std::filesystem::path& path) {
  LoadResult result;
  const std::string text = read_text_file(path, &result.diagnostics);
  TextColumn messages;
  messages.reserve(text.size() / 64 + 1, text.size());
  for_each_line(text, [&](std::string_view line) { messages.push_back(line); });
  result.diagnostics.lines_read = messages.size();

  const Timestamp now = wall_clock_now();
  TimestampColumn ts;
  ts.reserve(messages.size());
  for (std::size_t i = 0; i < messages.size(); ++i) ts.push_back(now);

  if (messages.size() == 0) result.diagnostics.warnings.push_back(path.filename().string() + ": empty input");
  result.events = Table::from_columns({{std::string(col::message), std::move(messages)},
                                       {std::string(col::timestamp), std::move(ts)}});
  return result;
}

}  // namespace loglead
