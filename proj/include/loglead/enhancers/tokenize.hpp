#pragma once

#include <string_view>
#include <vector>

#include "loglead/core/column.hpp"

namespace loglead {

inline constexpr bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

/// Splits on runs of ASCII whitespace; empty tokens are dropped.
/// The returned views point into `message`.
inline void split_words(std::string_view message, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t i = 0;
  const std::size_t n = message.size();
  while (i < n) {
    while (i < n && is_ascii_space(message[i])) ++i;
    const std::size_t start = i;
    while (i < n && !is_ascii_space(message[i])) ++i;
    if (i > start) out.push_back(message.substr(start, i - start));
  }
}

inline std::vector<std::string_view> split_words(std::string_view message) {
  std::vector<std::string_view> out;
  split_words(message, out);
  return out;
}

/// Word lists for a message column (e_words).
inline TextListColumn tokenize(const TextColumn& messages) {
  TextListColumn out;
  std::vector<std::string_view> words;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (messages.is_null(i)) {
      out.push_null();
      continue;
    }
    split_words(messages[i], words);
    out.push_back(words);
  }
  return out;
}

}  // namespace loglead
