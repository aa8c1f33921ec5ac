#pragma once

#include <string>
#include <utility>
#include <vector>

#include "loglead/core/table.hpp"

namespace loglead {

struct NullCell {
  std::string column;
  std::size_t row = 0;

  friend bool operator==(const NullCell&, const NullCell&) = default;
};

struct ValidationReport {
  std::vector<NullCell> null_cells;
  std::vector<std::string> missing_mandatory_columns;
  std::vector<std::string> warnings;

  bool valid() const {
    return null_cells.empty() && missing_mandatory_columns.empty() && warnings.empty();
  }
};

/// Lists every null cell and every missing mandatory column. Never throws and
/// never modifies the table; callers decide whether to surface the warnings.
inline ValidationReport validate_event_table(const EventTable& table) {
  ValidationReport report;
  for (std::string_view name : {col::message, col::timestamp}) {
    if (!table.has_column(name)) {
      report.missing_mandatory_columns.emplace_back(name);
      report.warnings.push_back("missing mandatory column " + std::string(name));
    }
  }
  table.for_each_column([&](std::string_view name, const Column& c) {
    const Validity& v = validity_of(c);
    if (!v.has_nulls()) return;
    const std::size_t n = size_of(c);
    for (std::size_t r = 0; r < n; ++r) {
      if (v.is_null(r)) report.null_cells.push_back({std::string(name), r});
    }
    report.warnings.push_back("column " + std::string(name) + " has " +
                              std::to_string(v.null_count()) + " null value(s)");
  });
  return report;
}

}  // namespace loglead
