#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loglead/core/error.hpp"
#include "loglead/enhancers/template_store.hpp"
#include "loglead/enhancers/tokenize.hpp"

namespace loglead {

struct DrainConfig {
  int depth = 4;               // tree depth incl. root and length layer; >= 3
  double sim_threshold = 0.4;  // in (0, 1)
  int max_children = 100;      // per internal node, >= 2

  void validate() const {
    if (depth < 3) throw ConfigError("drain: depth must be >= 3");
    if (!(sim_threshold > 0.0 && sim_threshold < 1.0)) throw ConfigError("drain: sim_threshold must be in (0,1)");
    if (max_children < 2) throw ConfigError("drain: max_children must be >= 2");
  }
};

/// Online Drain template miner.
///
/// Messages are routed through a fixed-depth tree: first by token count,
/// then by their leading depth-2 tokens (all-digit tokens route as "<*>").
/// The leaf holds candidate clusters; a message joins the most similar one
/// (fraction of positions where the template has the same literal token)
/// when that similarity reaches sim_threshold, replacing mismatching
/// positions with "<*>". Otherwise it starts a new cluster.
class DrainParser {
 public:
  explicit DrainParser(DrainConfig config = {}) : config_(config), store_(ParserKind::drain) { config_.validate(); }

  const DrainConfig& config() const { return config_; }
  const TemplateStore& store() const { return store_; }

  std::int64_t add_message(std::string_view message) {
    split_words(message, scratch_);
    return add_tokens(scratch_);
  }

  std::int64_t add_tokens(std::span<const std::string_view> tokens) {
    Node& length_node = by_length_[tokens.size()];
    if (Node* leaf = find_leaf(length_node, tokens)) {
      std::int64_t best = -1;
      double best_sim = -1.0;
      for (std::int64_t id : leaf->clusters) {
        const double sim = similarity(store_.at(id).tokens, tokens);
        if (sim > best_sim) {
          best_sim = sim;
          best = id;
        }
      }
      if (best >= 0 && best_sim >= config_.sim_threshold) {
        auto& tmpl = store_.tokens_mut(best);
        for (std::size_t i = 0; i < tmpl.size(); ++i)
          if (tmpl[i] != tokens[i]) tmpl[i] = kWildcard;
        store_.bump(best);
        return best;
      }
    }
    const std::int64_t id = store_.add(tokens);
    insert_leaf(length_node, tokens).clusters.push_back(id);
    return id;
  }

 private:
  struct Node {
    std::map<std::string, std::unique_ptr<Node>, std::less<>> children;
    std::vector<std::int64_t> clusters;
  };

  static bool all_digits(std::string_view t) {
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return !t.empty();
  }

  static std::string_view routing_key(std::string_view token) {
    return all_digits(token) ? kWildcard : token;
  }

  std::size_t token_layers(std::size_t n) const {
    return std::min<std::size_t>(n, static_cast<std::size_t>(config_.depth - 2));
  }

  Node* find_leaf(Node& length_node, std::span<const std::string_view> tokens) const {
    Node* node = &length_node;
    for (std::size_t i = 0; i < token_layers(tokens.size()); ++i) {
      auto it = node->children.find(routing_key(tokens[i]));
      if (it == node->children.end()) it = node->children.find(kWildcard);
      if (it == node->children.end()) return nullptr;
      node = it->second.get();
    }
    return node;
  }

  Node& insert_leaf(Node& length_node, std::span<const std::string_view> tokens) {
    Node* node = &length_node;
    const auto max_children = static_cast<std::size_t>(config_.max_children);
    for (std::size_t i = 0; i < token_layers(tokens.size()); ++i) {
      const std::string_view key = routing_key(tokens[i]);
      auto& kids = node->children;
      auto it = kids.find(key);
      if (it == kids.end()) {
        const bool has_wildcard = kids.find(kWildcard) != kids.end();
        std::string_view target = key;
        if (key != kWildcard) {
          if (has_wildcard) {
            if (kids.size() >= max_children) target = kWildcard;
          } else if (kids.size() + 1 >= max_children) {
            target = kWildcard;  // reserve the last slot for the wildcard child
          }
        }
        it = kids.find(target);
        if (it == kids.end()) it = kids.emplace(std::string(target), std::make_unique<Node>()).first;
      }
      node = it->second.get();
    }
    return *node;
  }

  static double similarity(const std::vector<std::string>& tmpl, std::span<const std::string_view> tokens) {
    if (tokens.empty()) return 1.0;
    std::size_t same = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i)
      if (tmpl[i] != kWildcard && tmpl[i] == tokens[i]) ++same;
    return static_cast<double>(same) / static_cast<double>(tokens.size());
  }

  DrainConfig config_;
  TemplateStore store_;
  std::map<std::size_t, Node> by_length_;
  std::vector<std::string_view> scratch_;
};

}  // namespace loglead
