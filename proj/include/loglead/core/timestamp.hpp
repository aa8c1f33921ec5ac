#pragma once

#include <charconv>
#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace loglead {

/// Timezone-naive point in time, microsecond resolution, counted from
/// 1970-01-01 00:00:00. Sources with coarser precision are zero-filled.
struct Timestamp {
  std::int64_t micros = 0;

  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;
};

inline constexpr std::int64_t kMicrosPerSecond = 1'000'000;

namespace detail {

template <class Int>
inline std::optional<Int> parse_int(std::string_view s) {
  Int value{};
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first == last) return std::nullopt;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

// Fixed-width, digits-only field.
inline std::optional<int> parse_digits(std::string_view s) {
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return s.empty() ? std::nullopt : std::optional<int>(v);
}

}  // namespace detail

/// Builds a timestamp from civil fields; returns nullopt for invalid dates.
inline std::optional<Timestamp> make_timestamp(int year, int month, int day, int hour, int minute,
                                               int second, int micros = 0) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 ||
      second > 60 || micros < 0 || micros >= kMicrosPerSecond) {
    return std::nullopt;
  }
  const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  const std::int64_t secs = days * 86400 + hour * 3600 + minute * 60 + second;
  return Timestamp{secs * kMicrosPerSecond + micros};
}

inline Timestamp from_epoch_seconds(std::int64_t seconds) {
  return Timestamp{seconds * kMicrosPerSecond};
}

/// "YYYY-MM-DD HH:MM:SS.ffffff"
inline std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  std::int64_t secs = ts.micros / kMicrosPerSecond;
  std::int64_t frac = ts.micros % kMicrosPerSecond;
  if (frac < 0) {
    frac += kMicrosPerSecond;
    --secs;
  }
  std::int64_t days = secs / 86400;
  std::int64_t sod = secs % 86400;
  if (sod < 0) {
    sod += 86400;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d.%06lld", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(sod / 3600), static_cast<int>((sod / 60) % 60),
                static_cast<int>(sod % 60), static_cast<long long>(frac));
  return buf;
}

inline Timestamp wall_clock_now() {
  using namespace std::chrono;
  return Timestamp{duration_cast<microseconds>(system_clock::now().time_since_epoch()).count()};
}

}  // namespace loglead
