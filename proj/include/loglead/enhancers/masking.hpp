#pragma once

#include <filesystem>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include <boost/regex.hpp>

#include "loglead/core/column.hpp"
#include "loglead/core/error.hpp"
#include "loglead/loaders/source.hpp"

namespace loglead {

/// One masking step: every non-overlapping match of `pattern` becomes `token`.
/// Patterns are restricted to constructs a finite-automaton engine supports:
/// look-ahead, look-behind and backreferences are rejected when the rule is
/// built, never when it is applied.
class MaskingRule {
 public:
  MaskingRule(std::string pattern, std::string token) : pattern_(std::move(pattern)), token_(std::move(token)) {
    check_token(token_);
    check_pattern(pattern_);
    try {
      regex_.assign(pattern_, boost::regex::perl);
    } catch (const boost::regex_error& e) {
      throw ConfigError("masking rule '" + pattern_ + "': " + e.what());
    }
  }

  const std::string& pattern() const { return pattern_; }
  const std::string& token() const { return token_; }
  const boost::regex& regex() const { return regex_; }

 private:
  static void check_token(std::string_view t) {
    if (t.size() < 3 || t.front() != '<' || t.back() != '>') {
      throw ConfigError("masking token must look like <NAME>, got '" + std::string(t) + "'");
    }
  }

  static void check_pattern(std::string_view p) {
    for (std::string_view bad : {"(?=", "(?!", "(?<=", "(?<!"}) {
      if (p.find(bad) != std::string_view::npos) {
        throw ConfigError("masking rule '" + std::string(p) + "' uses look-around, which is not supported");
      }
    }
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      if (p[i] == '\\') {
        if (p[i + 1] >= '1' && p[i + 1] <= '9') {
          throw ConfigError("masking rule '" + std::string(p) + "' uses a backreference, which is not supported");
        }
        ++i;
      }
    }
  }

  std::string pattern_;
  std::string token_;
  boost::regex regex_;
};

using MaskingRules = std::vector<MaskingRule>;

/// IPv4 addresses, then hexadecimal numbers (0x-prefixed with at least two
/// digits, or bare words mixing digits and a-f letters), then decimal
/// integers. Every rule needs a digit to match and no token contains one,
/// so applying the set twice changes nothing.
inline MaskingRules default_masking_rules() {
  MaskingRules rules;
  rules.emplace_back(R"(\b\d{1,3}(?:\.\d{1,3}){3}\b)", "<IP>");
  rules.emplace_back(R"(\b(?:0[xX][0-9a-fA-F]{2,}|[0-9]+[a-fA-F][0-9a-fA-F]*|[a-fA-F]+[0-9][0-9a-fA-F]*)\b)",
                     "<HEX>");
  rules.emplace_back(R"(\b\d+\b)", "<NUM>");
  return rules;
}

/// Reads `PATTERN<TAB><TOKEN>` lines; blank lines are skipped.
inline MaskingRules read_masking_rules(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  MaskingRules rules;
  std::size_t line_no = 0;
  for_each_line(text, [&](std::string_view line) {
    ++line_no;
    if (line.empty()) return;
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected PATTERN<TAB><TOKEN>");
    }
    rules.emplace_back(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  });
  return rules;
}

/// Applies the rules in order to one message.
inline std::string mask_message(std::string_view message, const MaskingRules& rules) {
  std::string current(message);
  std::string next;
  for (const auto& rule : rules) {
    next.clear();
    boost::regex_replace(std::back_inserter(next), current.begin(), current.end(), rule.regex(), rule.token(),
                         boost::regex_constants::format_literal);
    current.swap(next);
  }
  return current;
}

/// Column-level normalization: output row i is mask_message(messages[i]).
/// Nulls stay null.
inline TextColumn normalize(const TextColumn& messages, const MaskingRules& rules) {
  TextColumn out;
  out.reserve(messages.size(), messages.data().size());
  std::string current;
  std::string next;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (messages.is_null(i)) {
      out.push_null();
      continue;
    }
    current.assign(messages[i]);
    for (const auto& rule : rules) {
      next.clear();
      boost::regex_replace(std::back_inserter(next), current.begin(), current.end(), rule.regex(), rule.token(),
                           boost::regex_constants::format_literal);
      current.swap(next);
    }
    out.push_back(current);
  }
  return out;
}

/// Self-contained masker for parsers that normalize each message inside
/// their own parse loop. Uses std::regex (ECMAScript); for the supported
/// pattern subset it produces the same output as normalize().
class InlineMasker {
 public:
  explicit InlineMasker(const MaskingRules& rules) {
    for (const auto& r : rules) {
      try {
        steps_.push_back({std::regex(r.pattern(), std::regex::ECMAScript | std::regex::optimize), escape(r.token())});
      } catch (const std::regex_error& e) {
        throw ConfigError("masking rule '" + r.pattern() + "': " + e.what());
      }
    }
  }

  std::string operator()(std::string_view message) const {
    std::string current(message);
    for (const auto& s : steps_) {
      current = std::regex_replace(current, s.regex, s.replacement);
    }
    return current;
  }

 private:
  // std::regex has no literal format flag; '$' is the only format metacharacter.
  static std::string escape(const std::string& token) {
    std::string out;
    for (char c : token) {
      if (c == '$') out += '$';
      out += c;
    }
    return out;
  }

  struct Step {
    std::regex regex;
    std::string replacement;
  };
  std::vector<Step> steps_;
};

}  // namespace loglead
