#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "loglead/features/vocabulary.hpp"

namespace loglead {

/// Compressed sparse row matrix. Column indices within a row are ascending
/// and every stored value is non-zero.
template <class T>
class CsrMatrix {
 public:
  using value_type = T;

  CsrMatrix() = default;
  explicit CsrMatrix(std::size_t cols) : cols_(cols) {}

  std::size_t rows() const { return row_ptr_.size() - 1; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  /// Appends a row from (column, value) pairs; pairs are sorted, duplicates summed.
  void push_row(std::vector<std::pair<std::uint32_t, T>> entries) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < entries.size();) {
      const std::uint32_t c = entries[k].first;
      if (c >= cols_) throw std::out_of_range("CsrMatrix: column out of range");
      T sum{};
      for (; k < entries.size() && entries[k].first == c; ++k) sum += entries[k].second;
      if (sum != T{}) {
        col_idx_.push_back(c);
        values_.push_back(sum);
      }
    }
    row_ptr_.push_back(values_.size());
  }

  std::span<const std::uint32_t> row_indices(std::size_t r) const {
    return std::span<const std::uint32_t>(col_idx_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
  }
  std::span<const T> row_values(std::size_t r) const {
    return std::span<const T>(values_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
  }

  T at(std::size_t r, std::size_t c) const {
    auto idx = row_indices(r);
    auto it = std::lower_bound(idx.begin(), idx.end(), static_cast<std::uint32_t>(c));
    if (it == idx.end() || *it != c) return T{};
    return row_values(r)[static_cast<std::size_t>(it - idx.begin())];
  }

  std::vector<double> dense_row(std::size_t r) const {
    std::vector<double> out(cols_, 0.0);
    auto idx = row_indices(r);
    auto val = row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = static_cast<double>(val[k]);
    return out;
  }

  /// Row subset in the given order.
  CsrMatrix take_rows(std::span<const std::size_t> rows) const {
    CsrMatrix out(cols_);
    for (std::size_t r : rows) {
      auto idx = row_indices(r);
      auto val = row_values(r);
      out.col_idx_.insert(out.col_idx_.end(), idx.begin(), idx.end());
      out.values_.insert(out.values_.end(), val.begin(), val.end());
      out.row_ptr_.push_back(out.values_.size());
    }
    return out;
  }

  /// Debug export: one `row col value` line per stored entry.
  void write_triplets(std::ostream& os) const {
    for (std::size_t r = 0; r < rows(); ++r) {
      auto idx = row_indices(r);
      auto val = row_values(r);
      for (std::size_t k = 0; k < idx.size(); ++k) os << r << ' ' << idx[k] << ' ' << val[k] << '\n';
    }
  }

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<T> values_;
};

using FeatureMatrix = CsrMatrix<std::uint32_t>;

struct Vectorized {
  FeatureMatrix matrix;
  std::vector<std::uint64_t> oov_counts;  // tokens per document absent from the vocabulary
  std::vector<std::uint64_t> lengths;     // tokens per document
};

/// Bag-of-words counts over a fitted vocabulary. With `binary`, each present
/// term counts once. Out-of-vocabulary tokens are only tallied in oov_counts.
template <class Docs>
Vectorized vectorize(const Docs& docs, const Vocabulary& vocab, bool binary = false) {
  Vectorized out{FeatureMatrix(vocab.size()), {}, {}};
  out.oov_counts.reserve(docs.size());
  out.lengths.reserve(docs.size());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    entries.clear();
    std::uint64_t oov = 0, len = 0;
    for (const auto& token : docs[d]) {
      ++len;
      if (auto idx = vocab.index_of(std::string_view(token))) {
        entries.emplace_back(static_cast<std::uint32_t>(*idx), 1u);
      } else {
        ++oov;
      }
    }
    if (binary) {
      std::sort(entries.begin(), entries.end());
      entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
    }
    out.matrix.push_row(std::move(entries));
    entries = {};
    out.oov_counts.push_back(oov);
    out.lengths.push_back(len);
  }
  return out;
}

}  // namespace loglead
