#pragma once

#include <algorithm>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loglead/core/column.hpp"

namespace loglead {

/// Standardized column names shared by every loader and enhancer.
namespace col {
inline constexpr std::string_view message = "m_message";
inline constexpr std::string_view timestamp = "m_timestamp";
inline constexpr std::string_view seq_id = "seq_id";
inline constexpr std::string_view label = "label";
inline constexpr std::string_view normalized = "e_message_normalized";
inline constexpr std::string_view words = "e_words";
inline constexpr std::string_view event_id = "e_event_id";

// Sequence-level columns.
inline constexpr std::string_view seq_len = "seq_len";
inline constexpr std::string_view duration = "duration";  // int64 microseconds
inline constexpr std::string_view event_ids = "event_ids";
inline constexpr std::string_view seq_words = "words";
}  // namespace col

/// Immutable columnar table. Columns are shared between tables that derive
/// from each other, so adding a column never copies existing data.
class Table {
 public:
  Table() = default;

  /// Builds a table from named columns of equal length.
  static Table from_columns(std::vector<std::pair<std::string, Column>> columns) {
    Table t;
    for (auto& [name, data] : columns) t.add(std::move(name), std::move(data));
    return t;
  }

  std::size_t num_rows() const { return rows_; }
  std::size_t num_columns() const { return columns_.size(); }
  bool empty() const { return rows_ == 0; }

  std::vector<std::string> column_names() const {
    std::vector<std::string> names;
    names.reserve(columns_.size());
    for (const auto& e : columns_) names.push_back(e.name);
    return names;
  }

  bool has_column(std::string_view name) const { return find(name) != nullptr; }

  const Column& column(std::string_view name) const {
    const Entry* e = find(name);
    if (e == nullptr) throw std::invalid_argument("no such column: " + std::string(name));
    return *e->data;
  }

  template <class C>
  const C& get(std::string_view name) const {
    const Column& c = column(name);
    if (const C* typed = std::get_if<C>(&c)) return *typed;
    throw std::invalid_argument("column " + std::string(name) + " has type " +
                                std::string(to_string(type_of(c))) + ", expected " +
                                std::string(to_string(C::type)));
  }

  /// Returns a copy of this table with `name` added (or replaced).
  Table with_column(std::string name, Column data) const {
    Table t = *this;
    t.add(std::move(name), std::move(data));
    return t;
  }

  Table without_column(std::string_view name) const {
    Table t = *this;
    std::erase_if(t.columns_, [name](const Entry& e) { return e.name == name; });
    return t;
  }

  /// Row subset in the given order.
  Table take_rows(std::span<const std::size_t> rows) const {
    Table t;
    t.rows_ = rows.size();
    for (const auto& e : columns_) {
      t.columns_.push_back({e.name, std::make_shared<const Column>(take(*e.data, rows))});
    }
    return t;
  }

  template <class Fn>
  void for_each_column(Fn&& fn) const {
    for (const auto& e : columns_) fn(std::string_view(e.name), *e.data);
  }

 private:
  struct Entry {
    std::string name;
    std::shared_ptr<const Column> data;
  };

  const Entry* find(std::string_view name) const {
    for (const auto& e : columns_)
      if (e.name == name) return &e;
    return nullptr;
  }

  void add(std::string name, Column data) {
    const std::size_t n = size_of(data);
    const bool replacing = find(name) != nullptr;
    if (!columns_.empty() && !(replacing && columns_.size() == 1) && n != rows_) {
      throw std::invalid_argument("column " + name + " has " + std::to_string(n) +
                                  " rows, table has " + std::to_string(rows_));
    }
    rows_ = n;
    auto ptr = std::make_shared<const Column>(std::move(data));
    for (auto& e : columns_) {
      if (e.name == name) {
        e.data = std::move(ptr);
        return;
      }
    }
    columns_.push_back({std::move(name), std::move(ptr)});
  }

  std::vector<Entry> columns_;
  std::size_t rows_ = 0;
};

/// One row per log event; mandatory columns m_message and m_timestamp.
using EventTable = Table;
/// One row per sequence; seq_id is the primary key.
using SequenceTable = Table;

}  // namespace loglead
