#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "loglead/core/error.hpp"
#include "loglead/enhancers/template_store.hpp"
#include "loglead/enhancers/tokenize.hpp"

namespace loglead {

struct SpellConfig {
  double tau = 0.5;  // in (0, 1]

  void validate() const {
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("spell: tau must be in (0,1]");
  }
};

/// Streaming LCS-based template miner (Spell).
///
/// A message joins the stored template with the longest common subsequence
/// (ties: lowest event id) when that LCS covers at least tau of the message
/// tokens. The merged template keeps the LCS tokens and puts a single "<*>"
/// in each gap between them where both the old template and the message had
/// tokens, so every message seen so far still contains the template as a
/// subsequence.
class SpellParser {
 public:
  explicit SpellParser(SpellConfig config = {}) : config_(config), store_(ParserKind::spell) { config_.validate(); }

  const SpellConfig& config() const { return config_; }
  const TemplateStore& store() const { return store_; }

  std::int64_t add_message(std::string_view message) {
    split_words(message, words_);
    return add_tokens(words_);
  }

  std::int64_t add_tokens(std::span<const std::string_view> tokens) {
    message_.clear();
    for (auto t : tokens) message_.push_back(intern(t));
    const std::size_t n = message_.size();

    if (n == 0) {
      for (std::size_t id = 0; id < entries_.size(); ++id) {
        if (entries_[id].seq.empty()) {
          store_.bump(static_cast<std::int64_t>(id));
          return static_cast<std::int64_t>(id);
        }
      }
      return create(tokens);
    }

    const double need = config_.tau * static_cast<double>(n) - 1e-9;
    std::int64_t best = -1;
    std::size_t best_len = 0;
    for (std::size_t id = 0; id < entries_.size(); ++id) {
      const Entry& e = entries_[id];
      // LCS can never exceed the template's literal tokens.
      if (static_cast<double>(e.literals) < need || (best >= 0 && e.literals <= best_len)) continue;
      const std::size_t len = is_literal_subsequence(e.seq) ? e.literals : lcs_length(e.seq);
      if (len == 0 || static_cast<double>(len) < need) continue;
      if (best < 0 || len > best_len) {
        best = static_cast<std::int64_t>(id);
        best_len = len;
      }
    }
    if (best < 0) return create(tokens);
    merge(best);
    store_.bump(best);
    return best;
  }

 private:
  static constexpr std::int32_t kWild = -1;

  struct Entry {
    std::vector<std::int32_t> seq;
    std::size_t literals = 0;
  };

  std::int32_t intern(std::string_view t) {
    auto it = dict_.find(std::string(t));
    if (it != dict_.end()) return it->second;
    const auto id = static_cast<std::int32_t>(names_.size());
    names_.emplace_back(t);
    dict_.emplace(names_.back(), id);
    return id;
  }

  std::int64_t create(std::span<const std::string_view> tokens) {
    Entry e;
    e.seq = message_;
    e.literals = message_.size();
    entries_.push_back(std::move(e));
    return store_.add(tokens);
  }

  bool is_literal_subsequence(const std::vector<std::int32_t>& seq) const {
    std::size_t j = 0;
    for (std::int32_t t : seq) {
      if (t == kWild) continue;
      while (j < message_.size() && message_[j] != t) ++j;
      if (j == message_.size()) return false;
      ++j;
    }
    return true;
  }

  std::size_t lcs_length(const std::vector<std::int32_t>& seq) {
    const std::size_t m = message_.size();
    row_.assign(m + 1, 0);
    for (std::int32_t t : seq) {
      std::size_t diag = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        const std::size_t up = row_[j];
        row_[j] = (t != kWild && t == message_[j - 1]) ? diag + 1 : std::max(up, row_[j - 1]);
        diag = up;
      }
    }
    return row_[m];
  }

  void merge(std::int64_t id) {
    Entry& e = entries_[static_cast<std::size_t>(id)];
    const std::size_t a = e.seq.size(), b = message_.size();
    std::vector<std::uint32_t> dp((a + 1) * (b + 1), 0);
    auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return dp[i * (b + 1) + j]; };
    for (std::size_t i = a; i-- > 0;) {
      for (std::size_t j = b; j-- > 0;) {
        at(i, j) = (e.seq[i] != kWild && e.seq[i] == message_[j]) ? at(i + 1, j + 1) + 1
                                                                   : std::max(at(i + 1, j), at(i, j + 1));
      }
    }
    // Forward walk yields the LCS pairs in order.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0, j = 0; i < a && j < b;) {
      if (e.seq[i] != kWild && e.seq[i] == message_[j] && at(i, j) == at(i + 1, j + 1) + 1) {
        pairs.emplace_back(i, j);
        ++i;
        ++j;
      } else if (at(i + 1, j) >= at(i, j + 1)) {
        ++i;
      } else {
        ++j;
      }
    }

    std::vector<std::int32_t> merged;
    std::size_t pi = 0, pj = 0;  // start of the current gap
    auto close_gap = [&](std::size_t i_end, std::size_t j_end) {
      if (i_end > pi && j_end > pj) merged.push_back(kWild);
    };
    for (auto [i, j] : pairs) {
      close_gap(i, j);
      merged.push_back(e.seq[i]);
      pi = i + 1;
      pj = j + 1;
    }
    close_gap(a, b);

    e.seq = std::move(merged);
    e.literals = pairs.size();
    auto& tokens = store_.tokens_mut(id);
    tokens.clear();
    for (std::int32_t t : e.seq) tokens.emplace_back(t == kWild ? std::string(kWildcard) : names_[t]);
  }

  SpellConfig config_;
  TemplateStore store_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::int32_t> dict_;
  std::vector<std::string> names_;
  std::vector<std::int32_t> message_;
  std::vector<std::string_view> words_;
  std::vector<std::size_t> row_;
};

}  // namespace loglead
