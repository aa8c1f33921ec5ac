#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "loglead/core/random.hpp"
#include "loglead/core/table.hpp"

namespace loglead {

struct TrainTestSplit {
  Table train;
  Table test;
  // Original row indices, ascending.
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

namespace detail {

// Groups rows into split units: one per distinct seq_id (first-appearance
// order) when the table has one, otherwise one per row. Rows with a null
// seq_id form their own singleton units.
inline std::vector<std::vector<std::size_t>> split_units(const Table& table) {
  std::vector<std::vector<std::size_t>> units;
  const std::size_t n = table.num_rows();
  if (!table.has_column(col::seq_id)) {
    units.resize(n);
    for (std::size_t r = 0; r < n; ++r) units[r].push_back(r);
    return units;
  }
  const auto& ids = table.get<TextColumn>(col::seq_id);
  std::unordered_map<std::string_view, std::size_t> unit_of;
  unit_of.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (ids.is_null(r)) {
      units.push_back({r});
      continue;
    }
    auto [it, inserted] = unit_of.try_emplace(ids[r], units.size());
    if (inserted) units.emplace_back();
    units[it->second].push_back(r);
  }
  return units;
}

}  // namespace detail

/// Seeded train/test split. When the table carries a seq_id column the split
/// unit is the sequence, so no sequence straddles train and test.
inline TrainTestSplit split_train_test(const Table& table, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must be in (0,1), got " + std::to_string(train_fraction));
  }
  if (table.empty()) throw std::invalid_argument("cannot split an empty table");

  auto units = detail::split_units(table);
  std::vector<std::size_t> order(units.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  shuffle(order, rng);

  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(units.size())));
  std::vector<std::uint8_t> in_train(table.num_rows(), 0);
  for (std::size_t k = 0; k < n_train; ++k) {
    for (std::size_t r : units[order[k]]) in_train[r] = 1;
  }

  TrainTestSplit out;
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    (in_train[r] ? out.train_rows : out.test_rows).push_back(r);
  }
  out.train = table.take_rows(out.train_rows);
  out.test = table.take_rows(out.test_rows);
  return out;
}

}  // namespace loglead
