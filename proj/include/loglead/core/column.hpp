#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "loglead/core/timestamp.hpp"

namespace loglead {

enum class DataType : std::uint8_t {
  text = 0,
  int64 = 1,
  timestamp = 2,
  boolean = 3,
  text_list = 4,
  int_list = 5,
};

inline std::string_view to_string(DataType t) {
  switch (t) {
    case DataType::text: return "text";
    case DataType::int64: return "int64";
    case DataType::timestamp: return "timestamp";
    case DataType::boolean: return "boolean";
    case DataType::text_list: return "text_list";
    case DataType::int_list: return "int_list";
  }
  return "unknown";
}

/// Null bitmap, one byte per row. Stays empty (all valid) until the first
/// null is pushed.
class Validity {
 public:
  void push(bool valid, std::size_t row) {
    if (bits_.empty()) {
      if (valid) return;
      bits_.assign(row, 1);
    }
    bits_.push_back(valid ? 1 : 0);
    if (!valid) ++null_count_;
  }

  bool is_null(std::size_t i) const { return !bits_.empty() && bits_[i] == 0; }
  std::size_t null_count() const { return null_count_; }
  bool has_nulls() const { return null_count_ > 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  void assign(std::vector<std::uint8_t> bits) {
    bits_ = std::move(bits);
    null_count_ = 0;
    for (auto b : bits_) null_count_ += (b == 0);
    if (null_count_ == 0) bits_.clear();
  }

  void append(const Validity& other, std::size_t my_rows, std::size_t other_rows) {
    if (!other.has_nulls()) {
      if (!bits_.empty()) bits_.insert(bits_.end(), other_rows, 1);
      return;
    }
    if (bits_.empty()) bits_.assign(my_rows, 1);
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    null_count_ += other.null_count_;
  }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t null_count_ = 0;
};

/// Contiguous UTF-8 text column: one byte buffer plus row offsets.
class TextColumn {
 public:
  using value_type = std::string_view;
  static constexpr DataType type = DataType::text;

  TextColumn() = default;
  TextColumn(std::initializer_list<std::string_view> values) {
    for (auto v : values) push_back(v);
  }

  void reserve(std::size_t rows, std::size_t bytes) {
    offsets_.reserve(rows + 1);
    data_.reserve(bytes);
  }

  void push_back(std::string_view s) {
    validity_.push(true, size());
    data_.append(s);
    offsets_.push_back(data_.size());
  }

  void push_null() {
    validity_.push(false, size());
    offsets_.push_back(data_.size());
  }

  /// Extends the last row in place (continuation lines).
  void append_to_last(std::string_view s) {
    if (size() == 0) throw std::logic_error("append_to_last on empty column");
    data_.append(s);
    offsets_.back() = data_.size();
  }

  std::string_view operator[](std::size_t i) const {
    return std::string_view(data_).substr(offsets_[i], offsets_[i + 1] - offsets_[i]);
  }

  std::size_t size() const { return offsets_.size() - 1; }
  bool is_null(std::size_t i) const { return validity_.is_null(i); }
  const Validity& validity() const { return validity_; }
  const std::string& data() const { return data_; }
  const std::vector<std::uint64_t>& offsets() const { return offsets_; }

  void append(const TextColumn& other) {
    validity_.append(other.validity_, size(), other.size());
    const std::uint64_t base = data_.size();
    data_.append(other.data_);
    for (std::size_t i = 1; i < other.offsets_.size(); ++i) offsets_.push_back(base + other.offsets_[i]);
  }

  static TextColumn from_parts(std::string data, std::vector<std::uint64_t> offsets,
                               std::vector<std::uint8_t> validity) {
    TextColumn c;
    c.data_ = std::move(data);
    c.offsets_ = std::move(offsets);
    c.validity_.assign(std::move(validity));
    return c;
  }

 private:
  std::string data_;
  std::vector<std::uint64_t> offsets_{0};
  Validity validity_;
};

template <class T, DataType Type>
class PrimitiveColumn {
 public:
  using value_type = T;
  using storage_type = std::conditional_t<std::is_same_v<T, bool>, std::uint8_t, T>;
  static constexpr DataType type = Type;

  PrimitiveColumn() = default;
  PrimitiveColumn(std::initializer_list<T> values) {
    for (auto v : values) push_back(v);
  }

  void reserve(std::size_t rows) { values_.reserve(rows); }

  void push_back(T v) {
    validity_.push(true, size());
    values_.push_back(static_cast<storage_type>(v));
  }

  void push_null() {
    validity_.push(false, size());
    values_.push_back(storage_type{});
  }

  T operator[](std::size_t i) const { return static_cast<T>(values_[i]); }
  std::size_t size() const { return values_.size(); }
  bool is_null(std::size_t i) const { return validity_.is_null(i); }
  const Validity& validity() const { return validity_; }
  std::span<const storage_type> values() const { return values_; }

  void append(const PrimitiveColumn& other) {
    validity_.append(other.validity_, size(), other.size());
    values_.insert(values_.end(), other.values_.begin(), other.values_.end());
  }

  static PrimitiveColumn from_parts(std::vector<storage_type> values,
                                    std::vector<std::uint8_t> validity) {
    PrimitiveColumn c;
    c.values_ = std::move(values);
    c.validity_.assign(std::move(validity));
    return c;
  }

 private:
  std::vector<storage_type> values_;
  Validity validity_;
};

using Int64Column = PrimitiveColumn<std::int64_t, DataType::int64>;
using TimestampColumn = PrimitiveColumn<Timestamp, DataType::timestamp>;
using BoolColumn = PrimitiveColumn<bool, DataType::boolean>;

/// Read-only view of a contiguous index range of a child column.
template <class Child>
class ChildSlice {
 public:
  using value_type = typename Child::value_type;

  class iterator {
   public:
    using iterator_category = std::random_access_iterator_tag;
    using value_type = typename Child::value_type;
    using difference_type = std::ptrdiff_t;
    using reference = value_type;
    using pointer = void;

    iterator() = default;
    iterator(const Child* c, std::size_t i) : child_(c), i_(i) {}
    value_type operator*() const { return (*child_)[i_]; }
    iterator& operator++() { ++i_; return *this; }
    iterator operator++(int) { auto t = *this; ++i_; return t; }
    iterator& operator--() { --i_; return *this; }
    iterator operator--(int) { auto t = *this; --i_; return t; }
    iterator& operator+=(difference_type n) { i_ += n; return *this; }
    iterator& operator-=(difference_type n) { i_ -= n; return *this; }
    friend iterator operator+(iterator it, difference_type n) { return it += n; }
    friend iterator operator+(difference_type n, iterator it) { return it += n; }
    friend iterator operator-(iterator it, difference_type n) { return it -= n; }
    friend difference_type operator-(iterator a, iterator b) {
      return static_cast<difference_type>(a.i_) - static_cast<difference_type>(b.i_);
    }
    value_type operator[](difference_type n) const { return (*child_)[i_ + n]; }
    friend bool operator==(iterator a, iterator b) { return a.i_ == b.i_; }
    friend auto operator<=>(iterator a, iterator b) { return a.i_ <=> b.i_; }

   private:
    const Child* child_ = nullptr;
    std::size_t i_ = 0;
  };

  ChildSlice(const Child* child, std::size_t begin, std::size_t end)
      : child_(child), begin_(begin), end_(end) {}

  std::size_t size() const { return end_ - begin_; }
  bool empty() const { return begin_ == end_; }
  value_type operator[](std::size_t k) const { return (*child_)[begin_ + k]; }
  iterator begin() const { return {child_, begin_}; }
  iterator end() const { return {child_, end_}; }

 private:
  const Child* child_;
  std::size_t begin_;
  std::size_t end_;
};

/// Variable-length list per row, stored as offsets into a flat child column.
template <class Child, DataType Type>
class ListColumn {
 public:
  using child_type = Child;
  using value_type = ChildSlice<Child>;
  static constexpr DataType type = Type;

  template <class Range>
  void push_back(const Range& items) {
    validity_.push(true, size());
    for (const auto& item : items) values_.push_back(item);
    offsets_.push_back(values_.size());
  }

  void push_back(std::initializer_list<typename Child::value_type> items) {
    push_back<std::initializer_list<typename Child::value_type>>(items);
  }

  void push_null() {
    validity_.push(false, size());
    offsets_.push_back(values_.size());
  }

  value_type operator[](std::size_t i) const { return {&values_, offsets_[i], offsets_[i + 1]}; }
  /// Range over the rows (each row is a ChildSlice).
  ChildSlice<ListColumn> rows() const { return {this, 0, size()}; }
  std::size_t list_size(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  std::size_t size() const { return offsets_.size() - 1; }
  bool is_null(std::size_t i) const { return validity_.is_null(i); }
  const Validity& validity() const { return validity_; }
  const Child& values() const { return values_; }
  const std::vector<std::uint64_t>& offsets() const { return offsets_; }

  void append(const ListColumn& other) {
    validity_.append(other.validity_, size(), other.size());
    const std::uint64_t base = values_.size();
    values_.append(other.values_);
    for (std::size_t i = 1; i < other.offsets_.size(); ++i) offsets_.push_back(base + other.offsets_[i]);
  }

  static ListColumn from_parts(Child values, std::vector<std::uint64_t> offsets,
                               std::vector<std::uint8_t> validity) {
    ListColumn c;
    c.values_ = std::move(values);
    c.offsets_ = std::move(offsets);
    c.validity_.assign(std::move(validity));
    return c;
  }

 private:
  Child values_;
  std::vector<std::uint64_t> offsets_{0};
  Validity validity_;
};

using TextListColumn = ListColumn<TextColumn, DataType::text_list>;
using IntListColumn = ListColumn<Int64Column, DataType::int_list>;

using Column = std::variant<TextColumn, Int64Column, TimestampColumn, BoolColumn, TextListColumn,
                            IntListColumn>;

inline DataType type_of(const Column& c) {
  return std::visit([](const auto& col) { return std::decay_t<decltype(col)>::type; }, c);
}

inline std::size_t size_of(const Column& c) {
  return std::visit([](const auto& col) { return col.size(); }, c);
}

inline bool is_null(const Column& c, std::size_t row) {
  return std::visit([row](const auto& col) { return col.is_null(row); }, c);
}

inline const Validity& validity_of(const Column& c) {
  return std::visit([](const auto& col) -> const Validity& { return col.validity(); }, c);
}

/// Gathers the given rows (in the given order) into a new column.
inline Column take(const Column& c, std::span<const std::size_t> rows) {
  return std::visit(
      [rows](const auto& col) -> Column {
        using C = std::decay_t<decltype(col)>;
        C out;
        for (std::size_t r : rows) {
          if (col.is_null(r)) {
            out.push_null();
          } else {
            out.push_back(col[r]);
          }
        }
        return out;
      },
      c);
}

/// Appends `tail` to `head`; both must hold the same alternative.
inline void append_column(Column& head, const Column& tail) {
  if (head.index() != tail.index()) throw std::invalid_argument("append_column: type mismatch");
  std::visit(
      [&tail](auto& col) {
        using C = std::decay_t<decltype(col)>;
        col.append(std::get<C>(tail));
      },
      head);
}

}  // namespace loglead
