#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "loglead/core/error.hpp"

namespace loglead {

/// Template position that matches any single token. A genuine log token
/// spelled "<*>" is indistinguishable from it.
inline constexpr std::string_view kWildcard = "<*>";

enum class ParserKind { drain, spell, lenma };

inline std::string_view to_string(ParserKind k) {
  switch (k) {
    case ParserKind::drain: return "drain";
    case ParserKind::spell: return "spell";
    case ParserKind::lenma: return "lenma";
  }
  return "unknown";
}

inline ParserKind parse_parser_kind(std::string_view s) {
  if (s == "drain") return ParserKind::drain;
  if (s == "spell") return ParserKind::spell;
  if (s == "lenma") return ParserKind::lenma;
  throw ConfigError("unknown parser '" + std::string(s) + "'");
}

struct LogTemplate {
  std::vector<std::string> tokens;
  std::uint64_t count = 0;
};

/// Positional match: same length, every non-wildcard position equal.
template <class A, class B>
bool matches_positionally(const A& tmpl, const B& tokens) {
  if (tmpl.size() != tokens.size()) return false;
  for (std::size_t i = 0; i < tmpl.size(); ++i)
    if (tmpl[i] != kWildcard && tmpl[i] != tokens[i]) return false;
  return true;
}

/// Subsequence match where each wildcard consumes exactly one token.
/// Greedy leftmost embedding is optimal for subsequence tests.
template <class A, class B>
bool matches_subsequence(const A& tmpl, const B& tokens) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    while (j < tokens.size() && tmpl[i] != kWildcard && tmpl[i] != tokens[j]) ++j;
    if (j == tokens.size()) return false;
    ++j;
  }
  return true;
}

/// Templates indexed by dense event id (first-seen order from 0).
class TemplateStore {
 public:
  explicit TemplateStore(ParserKind kind) : kind_(kind) {}

  ParserKind kind() const { return kind_; }
  std::size_t size() const { return templates_.size(); }
  bool empty() const { return templates_.empty(); }

  const LogTemplate& at(std::int64_t id) const { return templates_.at(static_cast<std::size_t>(id)); }
  const std::vector<LogTemplate>& templates() const { return templates_; }

  template <class Tokens>
  std::int64_t add(const Tokens& tokens) {
    LogTemplate t;
    t.tokens.reserve(tokens.size());
    for (const auto& tok : tokens) t.tokens.emplace_back(tok);
    t.count = 1;
    templates_.push_back(std::move(t));
    return static_cast<std::int64_t>(templates_.size() - 1);
  }

  std::vector<std::string>& tokens_mut(std::int64_t id) { return templates_.at(static_cast<std::size_t>(id)).tokens; }
  void bump(std::int64_t id) { ++templates_.at(static_cast<std::size_t>(id)).count; }

  /// Whether a message fits its assigned template under this parser's rule.
  template <class Tokens>
  bool matches(std::int64_t id, const Tokens& tokens) const {
    const auto& t = at(id).tokens;
    return kind_ == ParserKind::spell ? matches_subsequence(t, tokens) : matches_positionally(t, tokens);
  }

  std::string render(std::int64_t id) const {
    std::string out;
    for (const auto& tok : at(id).tokens) {
      if (!out.empty()) out += ' ';
      out += tok;
    }
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < templates_.size(); ++i) {
      arr.push_back({{"event_id", i}, {"template", templates_[i].tokens}, {"count", templates_[i].count}});
    }
    return {{"parser", std::string(to_string(kind_))}, {"templates", std::move(arr)}};
  }

  static TemplateStore from_json(const nlohmann::json& j) {
    TemplateStore s(parse_parser_kind(j.at("parser").get<std::string>()));
    for (const auto& t : j.at("templates")) {
      if (t.at("event_id").get<std::size_t>() != s.templates_.size()) {
        throw ConfigError("template store: event ids must be dense and ordered");
      }
      s.templates_.push_back({t.at("template").get<std::vector<std::string>>(), t.at("count").get<std::uint64_t>()});
    }
    return s;
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path.string());
    os << to_json().dump(2) << '\n';
  }

 private:
  ParserKind kind_;
  std::vector<LogTemplate> templates_;
};

}  // namespace loglead
