#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "loglead/core/error.hpp"
#include "loglead/core/table.hpp"

namespace loglead {

// Columnar on-disk format (little-endian, one file per table):
//
//   magic "LLTABLE1" | u64 rows | u32 ncols
//   per column: u32 name_len | name | u8 type | u8 has_validity
//               [rows x u8 validity] | payload
//
//   text:       u64 nbytes | (rows+1) x u64 offsets | bytes
//   int64/ts:   rows x i64
//   boolean:    rows x u8
//   lists:      (rows+1) x u64 offsets | child payload (validity-free)

namespace detail {

inline constexpr char kTableMagic[8] = {'L', 'L', 'T', 'A', 'B', 'L', 'E', '1'};

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
void put_vec(std::ostream& os, std::span<const T> v) {
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw IoError("truncated table file");
  return v;
}

template <class T>
std::vector<T> get_vec(std::istream& is, std::size_t n) {
  std::vector<T> v(n);
  if (n != 0 && !is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)))) {
    throw IoError("truncated table file");
  }
  return v;
}

inline void write_payload(std::ostream& os, const TextColumn& c) {
  put<std::uint64_t>(os, c.data().size());
  put_vec(os, std::span<const std::uint64_t>(c.offsets()));
  os.write(c.data().data(), static_cast<std::streamsize>(c.data().size()));
}

template <class T, DataType Ty>
void write_payload(std::ostream& os, const PrimitiveColumn<T, Ty>& c) {
  put_vec(os, c.values());
}

template <class Child, DataType Ty>
void write_payload(std::ostream& os, const ListColumn<Child, Ty>& c) {
  put_vec(os, std::span<const std::uint64_t>(c.offsets()));
  write_payload(os, c.values());
}

inline TextColumn read_text(std::istream& is, std::size_t rows, std::vector<std::uint8_t> validity) {
  const auto nbytes = get<std::uint64_t>(is);
  auto offsets = get_vec<std::uint64_t>(is, rows + 1);
  std::string data(nbytes, '\0');
  if (nbytes != 0 && !is.read(data.data(), static_cast<std::streamsize>(nbytes))) {
    throw IoError("truncated table file");
  }
  return TextColumn::from_parts(std::move(data), std::move(offsets), std::move(validity));
}

template <class C>
C read_primitive(std::istream& is, std::size_t rows, std::vector<std::uint8_t> validity) {
  auto values = get_vec<typename C::storage_type>(is, rows);
  return C::from_parts(std::move(values), std::move(validity));
}

inline Column read_column(std::istream& is, DataType type, std::size_t rows,
                          std::vector<std::uint8_t> validity) {
  switch (type) {
    case DataType::text: return read_text(is, rows, std::move(validity));
    case DataType::int64: return read_primitive<Int64Column>(is, rows, std::move(validity));
    case DataType::timestamp: return read_primitive<TimestampColumn>(is, rows, std::move(validity));
    case DataType::boolean: return read_primitive<BoolColumn>(is, rows, std::move(validity));
    case DataType::text_list: {
      auto offsets = get_vec<std::uint64_t>(is, rows + 1);
      auto child = read_text(is, offsets.back(), {});
      return TextListColumn::from_parts(std::move(child), std::move(offsets), std::move(validity));
    }
    case DataType::int_list: {
      auto offsets = get_vec<std::uint64_t>(is, rows + 1);
      auto child = read_primitive<Int64Column>(is, offsets.back(), {});
      return IntListColumn::from_parts(std::move(child), std::move(offsets), std::move(validity));
    }
  }
  throw IoError("unknown column type tag " + std::to_string(static_cast<int>(type)));
}

}  // namespace detail

inline void write_table(std::ostream& os, const Table& table) {
  os.write(detail::kTableMagic, sizeof detail::kTableMagic);
  detail::put<std::uint64_t>(os, table.num_rows());
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(table.num_columns()));
  table.for_each_column([&](std::string_view name, const Column& c) {
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    detail::put<std::uint8_t>(os, static_cast<std::uint8_t>(type_of(c)));
    const auto& v = validity_of(c);
    detail::put<std::uint8_t>(os, v.has_nulls() ? 1 : 0);
    if (v.has_nulls()) detail::put_vec(os, std::span<const std::uint8_t>(v.bits()));
    std::visit([&](const auto& typed) { detail::write_payload(os, typed); }, c);
  });
}

inline Table read_table(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, detail::kTableMagic, sizeof magic) != 0) {
    throw IoError("not a loglead table file");
  }
  const auto rows = detail::get<std::uint64_t>(is);
  const auto ncols = detail::get<std::uint32_t>(is);
  std::vector<std::pair<std::string, Column>> columns;
  for (std::uint32_t i = 0; i < ncols; ++i) {
    const auto len = detail::get<std::uint32_t>(is);
    std::string name(len, '\0');
    if (len != 0 && !is.read(name.data(), len)) throw IoError("truncated table file");
    const auto type = static_cast<DataType>(detail::get<std::uint8_t>(is));
    const bool has_validity = detail::get<std::uint8_t>(is) != 0;
    std::vector<std::uint8_t> validity;
    if (has_validity) validity = detail::get_vec<std::uint8_t>(is, rows);
    columns.emplace_back(std::move(name), detail::read_column(is, type, rows, std::move(validity)));
  }
  return Table::from_columns(std::move(columns));
}

inline void write_table_file(const std::filesystem::path& path, const Table& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  write_table(os, table);
  if (!os) throw IoError("write failed: " + path.string());
}

inline Table read_table_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path.string());
  return read_table(is);
}

// --- CSV (inspection only) ------------------------------------------------

namespace detail {

inline void write_csv_field(std::ostream& os, std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    os << s;
    return;
  }
  os << '"';
  for (char ch : s) {
    if (ch == '"') os << '"';
    os << ch;
  }
  os << '"';
}

inline std::string render_cell(const Column& c, std::size_t row) {
  return std::visit(
      [row](const auto& col) -> std::string {
        using C = std::decay_t<decltype(col)>;
        if (col.is_null(row)) return {};
        if constexpr (std::is_same_v<C, TextColumn>) {
          return std::string(col[row]);
        } else if constexpr (std::is_same_v<C, Int64Column>) {
          return std::to_string(col[row]);
        } else if constexpr (std::is_same_v<C, TimestampColumn>) {
          return format_timestamp(col[row]);
        } else if constexpr (std::is_same_v<C, BoolColumn>) {
          return col[row] ? "true" : "false";
        } else {
          std::string out;
          bool first = true;
          for (const auto& item : col[row]) {
            if (!first) out += ' ';
            first = false;
            if constexpr (std::is_same_v<C, TextListColumn>) {
              out += item;
            } else {
              out += std::to_string(item);
            }
          }
          return out;
        }
      },
      c);
}

}  // namespace detail

/// CSV with a header row; list cells are space-joined, nulls are empty.
inline void write_csv(std::ostream& os, const Table& table) {
  const auto names = table.column_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) os << ',';
    detail::write_csv_field(os, names[i]);
  }
  os << '\n';
  std::vector<const Column*> cols;
  for (const auto& n : names) cols.push_back(&table.column(n));
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) os << ',';
      detail::write_csv_field(os, detail::render_cell(*cols[i], r));
    }
    os << '\n';
  }
}

inline void write_csv_file(const std::filesystem::path& path, const Table& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  write_csv(os, table);
}

inline std::string serialize_table(const Table& table) {
  std::ostringstream os(std::ios::binary);
  write_table(os, table);
  return std::move(os).str();
}

}  // namespace loglead
