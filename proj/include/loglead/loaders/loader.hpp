#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "loglead/core/error.hpp"
#include "loglead/loaders/hadoop.hpp"
#include "loglead/loaders/hdfs.hpp"
#include "loglead/loaders/raw.hpp"
#include "loglead/loaders/supercomputer.hpp"

namespace loglead {

enum class LogFormat { hdfs, bgl, thunderbird, spirit, liberty, hadoop, raw };

inline std::optional<LogFormat> parse_log_format(std::string_view s) {
  if (s == "hdfs") return LogFormat::hdfs;
  if (s == "bgl") return LogFormat::bgl;
  if (s == "thunderbird") return LogFormat::thunderbird;
  if (s == "spirit") return LogFormat::spirit;
  if (s == "liberty") return LogFormat::liberty;
  if (s == "hadoop") return LogFormat::hadoop;
  if (s == "raw") return LogFormat::raw;
  return std::nullopt;
}

inline std::string_view to_string(LogFormat f) {
  switch (f) {
    case LogFormat::hdfs: return "hdfs";
    case LogFormat::bgl: return "bgl";
    case LogFormat::thunderbird: return "thunderbird";
    case LogFormat::spirit: return "spirit";
    case LogFormat::liberty: return "liberty";
    case LogFormat::hadoop: return "hadoop";
    case LogFormat::raw: return "raw";
  }
  return "unknown";
}

struct LoaderSpec {
  LogFormat format = LogFormat::raw;
  std::filesystem::path log_path;
  std::optional<std::filesystem::path> label_path;
};

/// Checks the per-format path requirements without touching the files.
inline void check_loader_spec(const LoaderSpec& spec) {
  if (spec.log_path.empty()) throw ConfigError("loader: log path is required");
  if (spec.format == LogFormat::hadoop && !spec.label_path) {
    throw ConfigError("loader: hadoop needs an application label file");
  }
}

inline LoadResult load(const LoaderSpec& spec) {
  check_loader_spec(spec);
  switch (spec.format) {
    case LogFormat::raw: return load_raw(spec.log_path);
    case LogFormat::hdfs: return load_hdfs(spec.log_path, spec.label_path);
    case LogFormat::bgl: return load_supercomputer(spec.log_path, SupercomputerFormat::bgl);
    case LogFormat::thunderbird: return load_supercomputer(spec.log_path, SupercomputerFormat::thunderbird);
    case LogFormat::spirit: return load_supercomputer(spec.log_path, SupercomputerFormat::spirit);
    case LogFormat::liberty: return load_supercomputer(spec.log_path, SupercomputerFormat::liberty);
    case LogFormat::hadoop: return load_hadoop(spec.log_path, *spec.label_path);
  }
  throw ConfigError("loader: unknown format");
}

}  // namespace loglead
