#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "loglead/core/column.hpp"

namespace loglead {

namespace detail {
struct TermHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
};
struct TermEq {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const { return a == b; }
};
}  // namespace detail

/// Term -> dense column index, in first-seen order.
class Vocabulary {
 public:
  Vocabulary() = default;

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  std::size_t fitted_on() const { return fitted_on_; }
  std::uint64_t min_count() const { return min_count_; }
  const std::vector<std::string>& terms() const { return terms_; }
  /// Corpus frequency of each term at fit time, by column index.
  const std::vector<std::uint64_t>& frequencies() const { return freq_; }

  std::optional<std::size_t> index_of(std::string_view term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(std::string_view term) const { return index_.find(term) != index_.end(); }

  /// Appends a term at the next index. Used by fitting and deserialization.
  void append_term(std::string term, std::uint64_t frequency) {
    if (index_.find(std::string_view(term)) != index_.end()) {
      throw std::invalid_argument("vocabulary: duplicate term " + term);
    }
    index_.emplace(term, terms_.size());
    terms_.push_back(std::move(term));
    freq_.push_back(frequency);
  }

  void set_fit_info(std::size_t fitted_on, std::uint64_t min_count) {
    fitted_on_ = fitted_on;
    min_count_ = min_count;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> freq_;
  std::unordered_map<std::string, std::size_t, detail::TermHash, detail::TermEq> index_;
  std::size_t fitted_on_ = 0;
  std::uint64_t min_count_ = 1;
};

/// Keeps terms whose corpus frequency is >= min_count, indexed in order of
/// first appearance. `docs` is any indexable collection of token ranges.
template <class Docs>
Vocabulary fit_vocabulary(const Docs& docs, std::uint64_t min_count = 1) {
  if (min_count < 1) throw std::invalid_argument("fit_vocabulary: min_count must be >= 1");
  std::vector<std::string> order;
  std::unordered_map<std::string, std::uint64_t, detail::TermHash, detail::TermEq> counts;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& token : docs[d]) {
      const std::string_view t(token);
      auto it = counts.find(t);
      if (it == counts.end()) {
        order.emplace_back(t);
        counts.emplace(order.back(), 1);
      } else {
        ++it->second;
      }
    }
  }
  Vocabulary v;
  v.set_fit_info(docs.size(), min_count);
  for (auto& term : order) {
    const std::uint64_t c = counts.find(std::string_view(term))->second;
    if (c >= min_count) v.append_term(std::move(term), c);
  }
  return v;
}

/// Event-id lists rendered as terms ("e<id>") so they share the
/// bag-of-words machinery.
inline TextListColumn event_id_documents(const IntListColumn& lists) {
  TextListColumn out;
  std::vector<std::string> buf;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (lists.is_null(i)) {
      out.push_null();
      continue;
    }
    buf.clear();
    for (std::int64_t id : lists[i]) buf.push_back("e" + std::to_string(id));
    out.push_back(buf);
  }
  return out;
}

/// Single event ids as one-term documents (event-level detection on parsed logs).
inline TextListColumn event_id_documents(const Int64Column& ids) {
  TextListColumn out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids.is_null(i)) {
      out.push_null();
    } else {
      out.push_back(std::vector<std::string>{"e" + std::to_string(ids[i])});
    }
  }
  return out;
}

}  // namespace loglead
