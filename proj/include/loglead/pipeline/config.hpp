#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "loglead/core/error.hpp"
#include "loglead/detectors/detector.hpp"
#include "loglead/enhancers/drain.hpp"
#include "loglead/enhancers/lenma.hpp"
#include "loglead/enhancers/spell.hpp"
#include "loglead/loaders/loader.hpp"

namespace loglead {

enum class EnhancerStep { normalize, tokenize, drain, spell, lenma, ngram, aggregate };

inline std::string_view to_string(EnhancerStep s) {
  switch (s) {
    case EnhancerStep::normalize: return "normalize";
    case EnhancerStep::tokenize: return "tokenize";
    case EnhancerStep::drain: return "drain";
    case EnhancerStep::spell: return "spell";
    case EnhancerStep::lenma: return "lenma";
    case EnhancerStep::ngram: return "ngram";
    case EnhancerStep::aggregate: return "aggregate";
  }
  return "?";
}

inline EnhancerStep parse_enhancer_step(std::string_view s) {
  for (auto e : {EnhancerStep::normalize, EnhancerStep::tokenize, EnhancerStep::drain, EnhancerStep::spell,
                 EnhancerStep::lenma, EnhancerStep::ngram, EnhancerStep::aggregate}) {
    if (s == to_string(e)) return e;
  }
  throw ConfigError("unknown enhancer '" + std::string(s) + "'");
}

inline bool is_parser_step(EnhancerStep s) {
  return s == EnhancerStep::drain || s == EnhancerStep::spell || s == EnhancerStep::lenma;
}

enum class DetectionLevel { event, sequence };
/// Which token documents feed the features: words or parsed event ids.
enum class FeatureSource { words, event_ids };

struct PipelineConfig {
  LoaderSpec loader;
  std::optional<std::filesystem::path> masking_rules;  // default rules when absent
  std::vector<EnhancerStep> chain;
  DrainConfig drain;
  SpellConfig spell;
  LenmaConfig lenma;
  int ngram_n = 2;
  double ngram_threshold = 0.05;

  DetectionLevel level = DetectionLevel::sequence;
  FeatureSource source = FeatureSource::words;
  bool binary = false;
  std::uint64_t min_count = 1;

  DetectorKind detector = DetectorKind::dt;
  double contamination = kDefaultContamination;
  double oov_threshold = 0.0;

  double train_fraction = 0.5;
  std::uint64_t seed = 42;

  std::filesystem::path output_dir = "out";
  bool write_csv_tables = false;

  bool has_step(EnhancerStep s) const { return std::find(chain.begin(), chain.end(), s) != chain.end(); }

  std::optional<EnhancerStep> parser() const {
    for (auto s : chain)
      if (is_parser_step(s)) return s;
    return std::nullopt;
  }

  /// Chain and feature dependency rules. Throws ConfigError.
  void validate() const {
    check_loader_spec(loader);
    std::set<EnhancerStep> seen;
    bool parser_seen = false;
    for (auto s : chain) {
      if (!seen.insert(s).second) throw ConfigError("enhancer '" + std::string(to_string(s)) + "' listed twice");
      if (is_parser_step(s)) {
        if (parser_seen) throw ConfigError("at most one parser (drain, spell, lenma) per chain");
        parser_seen = true;
      }
      if (s == EnhancerStep::ngram && !parser_seen) throw ConfigError("ngram needs a parser earlier in the chain");
    }
    if (has_step(EnhancerStep::aggregate) && loader.format != LogFormat::hdfs && loader.format != LogFormat::hadoop) {
      throw ConfigError("aggregate needs sequence ids, which only the hdfs and hadoop loaders provide");
    }
    if (level == DetectionLevel::sequence && !has_step(EnhancerStep::aggregate)) {
      throw ConfigError("sequence-level detection needs aggregate in the chain");
    }
    if (source == FeatureSource::words && !has_step(EnhancerStep::tokenize)) {
      throw ConfigError("features.source = words needs tokenize in the chain");
    }
    if (source == FeatureSource::event_ids && !parser_seen) {
      throw ConfigError("features.source = event_ids needs a parser in the chain");
    }
    if (min_count < 1) throw ConfigError("features.min_count must be >= 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("split.train_fraction must be in (0,1)");
    if (!(contamination > 0.0 && contamination < 1.0)) throw ConfigError("detector.contamination must be in (0,1)");
    if (oov_threshold < 0.0) throw ConfigError("detector.oov_threshold must be >= 0");
    if (ngram_n < 2) throw ConfigError("ngram.n must be >= 2");
    drain.validate();
    spell.validate();
    lenma.validate();
  }
};

namespace detail {

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const auto b = cur.find_first_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, cur.find_last_not_of(" \t") - b + 1));
    cur.clear();
  };
  for (char c : s) {
    if (c == ',') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

template <class T>
T config_value(const boost::property_tree::ptree& section, const std::string& key, const std::string& where) {
  // '/' as path separator: keys such as "drain.depth" are literal names.
  const boost::property_tree::ptree::path_type path(key, '/');
  const auto text = section.get<std::string>(path);
  if constexpr (std::is_same_v<T, std::string>) {
    return text;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(where + "." + key + ": expected true or false, got '" + text + "'");
  } else {
    auto v = section.get_optional<T>(path);
    if (!v) throw ConfigError(where + "." + key + ": cannot parse '" + text + "'");
    return *v;
  }
}

}  // namespace detail

/// Parses the line-oriented `[section]` / `key = value` pipeline config.
/// Relative input paths resolve against `base_dir`; output.dir is taken as
/// given. Unknown sections or keys are errors so typos do not pass silently.
///
///   [loader]    format, log, labels
///   [enhance]   chain (comma list), masking_rules,
///               drain.depth, drain.sim_threshold, drain.max_children,
///               spell.tau, lenma.threshold, ngram.n, ngram.threshold
///   [features]  level (event|sequence), source (words|event_ids), binary, min_count
///   [detector]  kind, contamination, oov_threshold
///   [split]     train_fraction, seed
///   [output]    dir, csv
inline PipelineConfig parse_pipeline_config(std::istream& in, const std::filesystem::path& base_dir = {}) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };

  PipelineConfig c;
  c.chain.clear();
  const std::map<std::string, std::set<std::string>> allowed = {
      {"loader", {"format", "log", "labels"}},
      {"enhance",
       {"chain", "masking_rules", "drain.depth", "drain.sim_threshold", "drain.max_children", "spell.tau",
        "lenma.threshold", "ngram.n", "ngram.threshold"}},
      {"features", {"level", "source", "binary", "min_count"}},
      {"detector", {"kind", "contamination", "oov_threshold"}},
      {"split", {"train_fraction", "seed"}},
      {"output", {"dir", "csv"}}};
  for (const auto& [name, section] : tree) {
    auto it = allowed.find(name);
    if (it == allowed.end()) throw ConfigError("config: unknown section [" + name + "]");
    if (section.empty() && !section.data().empty()) throw ConfigError("config: key '" + name + "' outside a section");
    for (const auto& [key, value] : section) {
      if (!it->second.count(key)) throw ConfigError("config: unknown key " + name + "." + key);
    }
  }

  auto section = [&](const std::string& name) {
    auto s = tree.get_child_optional(name);
    return s ? *s : pt::ptree{};
  };
  using detail::config_value;

  const auto loader = section("loader");
  if (!loader.count("format")) throw ConfigError("config: loader.format is required");
  const auto fmt = config_value<std::string>(loader, "format", "loader");
  const auto parsed = parse_log_format(fmt);
  if (!parsed) throw ConfigError("config: unknown loader.format '" + fmt + "'");
  c.loader.format = *parsed;
  if (loader.count("log")) c.loader.log_path = resolve(config_value<std::string>(loader, "log", "loader"));
  if (loader.count("labels")) c.loader.label_path = resolve(config_value<std::string>(loader, "labels", "loader"));

  const auto enhance = section("enhance");
  if (enhance.count("chain")) {
    for (const auto& s : detail::split_list(config_value<std::string>(enhance, "chain", "enhance")))
      c.chain.push_back(parse_enhancer_step(s));
  }
  if (enhance.count("masking_rules"))
    c.masking_rules = resolve(config_value<std::string>(enhance, "masking_rules", "enhance"));
  if (enhance.count("drain.depth")) c.drain.depth = config_value<int>(enhance, "drain.depth", "enhance");
  if (enhance.count("drain.sim_threshold"))
    c.drain.sim_threshold = config_value<double>(enhance, "drain.sim_threshold", "enhance");
  if (enhance.count("drain.max_children"))
    c.drain.max_children = config_value<int>(enhance, "drain.max_children", "enhance");
  if (enhance.count("spell.tau")) c.spell.tau = config_value<double>(enhance, "spell.tau", "enhance");
  if (enhance.count("lenma.threshold")) c.lenma.threshold = config_value<double>(enhance, "lenma.threshold", "enhance");
  if (enhance.count("ngram.n")) c.ngram_n = config_value<int>(enhance, "ngram.n", "enhance");
  if (enhance.count("ngram.threshold")) c.ngram_threshold = config_value<double>(enhance, "ngram.threshold", "enhance");

  const auto features = section("features");
  if (features.count("level")) {
    const auto v = config_value<std::string>(features, "level", "features");
    if (v == "event") c.level = DetectionLevel::event;
    else if (v == "sequence") c.level = DetectionLevel::sequence;
    else throw ConfigError("config: features.level must be event or sequence");
  }
  if (features.count("source")) {
    const auto v = config_value<std::string>(features, "source", "features");
    if (v == "words") c.source = FeatureSource::words;
    else if (v == "event_ids") c.source = FeatureSource::event_ids;
    else throw ConfigError("config: features.source must be words or event_ids");
  }
  if (features.count("binary")) c.binary = config_value<bool>(features, "binary", "features");
  if (features.count("min_count")) c.min_count = config_value<std::uint64_t>(features, "min_count", "features");

  const auto detector = section("detector");
  if (detector.count("kind")) c.detector = parse_detector_kind(config_value<std::string>(detector, "kind", "detector"));
  if (detector.count("contamination"))
    c.contamination = config_value<double>(detector, "contamination", "detector");
  if (detector.count("oov_threshold"))
    c.oov_threshold = config_value<double>(detector, "oov_threshold", "detector");

  const auto split = section("split");
  if (split.count("train_fraction")) c.train_fraction = config_value<double>(split, "train_fraction", "split");
  if (split.count("seed")) c.seed = config_value<std::uint64_t>(split, "seed", "split");

  const auto output = section("output");
  if (output.count("dir")) c.output_dir = config_value<std::string>(output, "dir", "output");
  if (output.count("csv")) c.write_csv_tables = config_value<bool>(output, "csv", "output");

  c.validate();
  return c;
}

inline PipelineConfig read_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse_pipeline_config(in, path.parent_path());
}

}  // namespace loglead
