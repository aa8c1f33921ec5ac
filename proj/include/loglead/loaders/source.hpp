#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loglead/core/error.hpp"
#include "loglead/core/table.hpp"

namespace loglead {

/// Counters and messages collected while loading. Warnings never abort a load.
struct LoadDiagnostics {
  std::size_t lines_read = 0;
  std::size_t merged_lines = 0;   // continuation / incomplete lines folded into the previous event
  std::size_t dropped_lines = 0;  // incomplete lines with no preceding event in the same file
  std::size_t replaced_bytes = 0; // invalid UTF-8 bytes replaced with U+FFFD
  std::vector<std::string> warnings;

  void absorb(const LoadDiagnostics& o) {
    lines_read += o.lines_read;
    merged_lines += o.merged_lines;
    dropped_lines += o.dropped_lines;
    replaced_bytes += o.replaced_bytes;
    warnings.insert(warnings.end(), o.warnings.begin(), o.warnings.end());
  }
};

struct LoadResult {
  EventTable events;
  std::optional<SequenceTable> sequences;
  LoadDiagnostics diagnostics;
};

namespace utf8 {

inline constexpr std::string_view kReplacement = "\xEF\xBF\xBD";

// Length of the valid UTF-8 sequence starting at s[i], or 0 if invalid.
inline std::size_t valid_sequence_length(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return 1;
  std::size_t len;
  unsigned char lo = 0x80, hi = 0xBF;
  if (b0 >= 0xC2 && b0 <= 0xDF) {
    len = 2;
  } else if (b0 >= 0xE0 && b0 <= 0xEF) {
    len = 3;
    if (b0 == 0xE0) lo = 0xA0;
    if (b0 == 0xED) hi = 0x9F;
  } else if (b0 >= 0xF0 && b0 <= 0xF4) {
    len = 4;
    if (b0 == 0xF0) lo = 0x90;
    if (b0 == 0xF4) hi = 0x8F;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  const auto b1 = static_cast<unsigned char>(s[i + 1]);
  if (b1 < lo || b1 > hi) return 0;
  for (std::size_t k = 2; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if (b < 0x80 || b > 0xBF) return 0;
  }
  return len;
}

inline bool is_ascii(std::string_view s) {
  std::size_t i = 0;
  for (; i + 8 <= s.size(); i += 8) {
    std::uint64_t w;
    std::memcpy(&w, s.data() + i, 8);
    if (w & 0x8080808080808080ULL) return false;
  }
  for (; i < s.size(); ++i)
    if (static_cast<unsigned char>(s[i]) >= 0x80) return false;
  return true;
}

/// Replaces every byte that does not start a well-formed UTF-8 sequence
/// with U+FFFD. Returns the number of replaced bytes.
inline std::size_t sanitize(std::string& text) {
  if (is_ascii(text)) return 0;
  std::string out;
  out.reserve(text.size() + 16);
  std::size_t replaced = 0;
  for (std::size_t i = 0; i < text.size();) {
    const std::size_t len = valid_sequence_length(text, i);
    if (len == 0) {
      out.append(kReplacement);
      ++replaced;
      ++i;
    } else {
      out.append(text, i, len);
      i += len;
    }
  }
  if (replaced != 0) text = std::move(out);
  return replaced;
}

}  // namespace utf8

/// Reads a whole file and repairs invalid UTF-8.
inline std::string read_text_file(const std::filesystem::path& path, LoadDiagnostics* diag = nullptr) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!f) throw IoError("cannot open " + path.string());
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  std::string text;
  if (!ec) {
    text.resize(size);
    text.resize(std::fread(text.data(), 1, size, f.get()));
  } else {
    char buf[1 << 16];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f.get())) > 0) text.append(buf, n);
  }
  if (std::ferror(f.get())) throw IoError("read failed: " + path.string());
  const std::size_t replaced = utf8::sanitize(text);
  if (diag != nullptr && replaced != 0) {
    diag->replaced_bytes += replaced;
    diag->warnings.push_back(path.filename().string() + ": replaced " + std::to_string(replaced) +
                             " invalid UTF-8 byte(s)");
  }
  return text;
}

/// Calls fn(line) for each line; '\n' separated, a trailing '\r' is
/// stripped, and a final unterminated line counts if non-empty.
template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const void* nl = std::memchr(text.data() + pos, '\n', text.size() - pos);
    const std::size_t end = nl ? static_cast<std::size_t>(static_cast<const char*>(nl) - text.data()) : text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line);
    pos = end + 1;
  }
}

/// Pops the next space-delimited field off `rest`. Fields are separated by
/// exactly one space so that joining them back with ' ' restores the line.
inline std::optional<std::string_view> next_field(std::string_view& rest) {
  if (rest.empty()) return std::nullopt;
  const std::size_t sp = rest.find(' ');
  std::string_view field;
  if (sp == std::string_view::npos) {
    field = rest;
    rest = {};
  } else {
    field = rest.substr(0, sp);
    rest.remove_prefix(sp + 1);
  }
  if (field.empty()) return std::nullopt;
  return field;
}

/// Feeds lines to a format builder. A line the builder rejects is folded into
/// the previous event of the same file, or dropped (and counted) when there
/// is none.
template <class Builder>
void feed_lines(std::string_view text, Builder& builder, LoadDiagnostics& diag) {
  for_each_line(text, [&](std::string_view line) {
    ++diag.lines_read;
    if (builder.try_add(line)) return;
    if (builder.rows() > 0) {
      builder.append_continuation(line);
      ++diag.merged_lines;
    } else {
      ++diag.dropped_lines;
    }
  });
}

inline void note_incomplete_lines(LoadDiagnostics& diag, std::string_view source) {
  if (diag.dropped_lines != 0) {
    diag.warnings.push_back(std::string(source) + ": dropped " + std::to_string(diag.dropped_lines) +
                            " incomplete line(s) with no preceding event");
  }
}

/// Case-insensitive "normal" check used by every label file reader;
/// anything else ("Anomaly", "Disk full", ...) is an anomaly.
inline bool label_is_anomaly(std::string_view value) {
  constexpr std::string_view normal = "normal";
  if (value.size() != normal.size()) return true;
  for (std::size_t i = 0; i < normal.size(); ++i) {
    char c = value[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != normal[i]) return true;
  }
  return false;
}

}  // namespace loglead
