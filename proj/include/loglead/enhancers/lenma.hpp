#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "loglead/core/error.hpp"
#include "loglead/enhancers/template_store.hpp"
#include "loglead/enhancers/tokenize.hpp"

namespace loglead {

struct LenmaConfig {
  double threshold = 0.9;  // in (0, 1]

  void validate() const {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("lenma: threshold must be in (0,1]");
  }
};

/// Length-matrix clustering (LenMa).
///
/// Candidates are clusters with the same token count whose first word equals
/// the message's first word. Similarity is 1 when every literal template
/// token matches, otherwise the cosine between the message's word-length
/// vector and the vector of the message that founded the cluster. The best
/// candidate at or above the threshold absorbs the message (differing
/// positions become "<*>"); otherwise a new cluster starts.
class LenmaParser {
 public:
  explicit LenmaParser(LenmaConfig config = {}) : config_(config), store_(ParserKind::lenma) { config_.validate(); }

  const LenmaConfig& config() const { return config_; }
  const TemplateStore& store() const { return store_; }

  std::int64_t add_message(std::string_view message) {
    split_words(message, words_);
    return add_tokens(words_);
  }

  std::int64_t add_tokens(std::span<const std::string_view> tokens) {
    lengths_.clear();
    double norm2 = 0.0;
    for (auto t : tokens) {
      lengths_.push_back(static_cast<double>(t.size()));
      norm2 += lengths_.back() * lengths_.back();
    }
    const double norm = std::sqrt(norm2);

    auto& candidates = by_count_[tokens.size()];
    std::int64_t best = -1;
    double best_sim = -1.0;
    for (std::int64_t id : candidates) {
      const auto& tmpl = store_.at(id).tokens;
      if (!tokens.empty() && tmpl[0] != tokens[0]) continue;
      double sim;
      if (matches_positionally(tmpl, tokens)) {
        sim = 1.0;
      } else {
        const Cluster& c = clusters_[static_cast<std::size_t>(id)];
        double dot = 0.0;
        for (std::size_t i = 0; i < lengths_.size(); ++i) dot += lengths_[i] * c.lengths[i];
        sim = (norm > 0.0 && c.norm > 0.0) ? dot / (norm * c.norm) : 0.0;
      }
      if (sim > best_sim) {
        best_sim = sim;
        best = id;
      }
    }
    if (best >= 0 && best_sim >= config_.threshold - 1e-12) {
      auto& tmpl = store_.tokens_mut(best);
      for (std::size_t i = 0; i < tmpl.size(); ++i)
        if (tmpl[i] != tokens[i]) tmpl[i] = kWildcard;
      store_.bump(best);
      return best;
    }
    const std::int64_t id = store_.add(tokens);
    clusters_.push_back({lengths_, norm});
    candidates.push_back(id);
    return id;
  }

 private:
  struct Cluster {
    std::vector<double> lengths;
    double norm = 0.0;
  };

  LenmaConfig config_;
  TemplateStore store_;
  std::map<std::size_t, std::vector<std::int64_t>> by_count_;
  std::vector<Cluster> clusters_;
  std::vector<std::string_view> words_;
  std::vector<double> lengths_;
};

}  // namespace loglead
