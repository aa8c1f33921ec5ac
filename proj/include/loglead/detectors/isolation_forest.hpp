#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "loglead/core/parallel.hpp"
#include "loglead/core/random.hpp"
#include "loglead/features/sparse_matrix.hpp"

namespace loglead {

struct IsolationForestConfig {
  std::size_t trees = 100;
  std::size_t max_samples = 256;
  std::uint64_t seed = 0;
};

/// Average unsuccessful-search path length in a BST of n nodes.
inline double iforest_c(double n) {
  if (n <= 1.0) return 0.0;
  if (n == 2.0) return 1.0;
  constexpr double euler_gamma = 0.5772156649015329;
  return 2.0 * (std::log(n - 1.0) + euler_gamma) - 2.0 * (n - 1.0) / n;
}

/// Isolation forest. Each tree is grown on min(max_samples, N) rows drawn
/// without replacement, splitting on a uniformly chosen non-constant feature
/// at a uniform cut, to height ceil(log2(psi)). Score is 2^(-E[h(x)]/c(psi)).
/// Tree t uses its own stream derive_seed(seed, t), so trees can be built in
/// any order.
class IsolationForest {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 for leaves
    double cut = 0.0;
    std::int32_t left = -1, right = -1;
    std::uint32_t size = 0;  // training rows reaching a leaf
  };
  using Tree = std::vector<Node>;

  IsolationForestConfig config;
  std::size_t psi = 0;
  std::vector<Tree> trees;

  template <class T>
  static IsolationForest train(const CsrMatrix<T>& x, const IsolationForestConfig& cfg = {}) {
    if (x.rows() < 2) throw std::invalid_argument("isolation forest: needs at least 2 rows");
    if (cfg.trees == 0 || cfg.max_samples < 2) throw std::invalid_argument("isolation forest: bad config");
    IsolationForest f;
    f.config = cfg;
    f.psi = std::min(cfg.max_samples, x.rows());
    f.trees.resize(cfg.trees);
    const int height_limit = static_cast<int>(std::ceil(std::log2(static_cast<double>(f.psi))));
    parallel_for_index(cfg.trees, [&](std::size_t t) {
      Rng rng(derive_seed(cfg.seed, t));
      std::vector<std::size_t> all(x.rows());
      std::iota(all.begin(), all.end(), 0);
      // Partial Fisher-Yates: the first psi slots become the sample.
      for (std::size_t i = 0; i < f.psi; ++i) std::swap(all[i], all[i + uniform_index(rng, all.size() - i)]);
      all.resize(f.psi);
      std::vector<std::vector<double>> sample;
      sample.reserve(f.psi);
      for (std::size_t r : all) sample.push_back(x.dense_row(r));
      std::vector<std::size_t> idx(f.psi);
      std::iota(idx.begin(), idx.end(), 0);
      grow(f.trees[t], sample, idx, 0, height_limit, rng);
    });
    return f;
  }

  template <class T>
  std::vector<double> scores(const CsrMatrix<T>& x) const {
    std::vector<double> out(x.rows());
    const double norm = iforest_c(static_cast<double>(psi));
    for (std::size_t r = 0; r < x.rows(); ++r) {
      double total = 0.0;
      for (const Tree& tree : trees) total += path_length(tree, x, r);
      const double mean = total / static_cast<double>(trees.size());
      out[r] = norm > 0 ? std::exp2(-mean / norm) : 0.5;
    }
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const Tree& tree : trees) {
      nlohmann::json t = nlohmann::json::array();
      for (const Node& n : tree) t.push_back({n.feature, n.cut, n.left, n.right, n.size});
      arr.push_back(std::move(t));
    }
    return {{"trees", arr}, {"max_samples", config.max_samples}, {"psi", psi}};
  }

  static IsolationForest from_json(const nlohmann::json& j) {
    IsolationForest f;
    f.config.max_samples = j.at("max_samples");
    f.psi = j.at("psi");
    for (const auto& t : j.at("trees")) {
      Tree tree;
      for (const auto& a : t)
        tree.push_back({a[0].get<std::int32_t>(), a[1].get<double>(), a[2].get<std::int32_t>(), a[3].get<std::int32_t>(),
                        a[4].get<std::uint32_t>()});
      f.trees.push_back(std::move(tree));
    }
    f.config.trees = f.trees.size();
    return f;
  }

 private:
  static std::int32_t grow(Tree& tree, const std::vector<std::vector<double>>& sample, std::vector<std::size_t>& idx,
                           int height, int limit, Rng& rng) {
    const auto id = static_cast<std::int32_t>(tree.size());
    tree.emplace_back();
    tree[id].size = static_cast<std::uint32_t>(idx.size());
    if (height >= limit || idx.size() <= 1) return id;

    const std::size_t dims = sample.front().size();
    std::vector<std::size_t> candidates;
    std::vector<std::pair<double, double>> ranges;
    for (std::size_t j = 0; j < dims; ++j) {
      double lo = sample[idx[0]][j], hi = lo;
      for (std::size_t i : idx) {
        lo = std::min(lo, sample[i][j]);
        hi = std::max(hi, sample[i][j]);
      }
      if (lo < hi) {
        candidates.push_back(j);
        ranges.emplace_back(lo, hi);
      }
    }
    if (candidates.empty()) return id;
    const std::size_t c = uniform_index(rng, candidates.size());
    const std::size_t feature = candidates[c];
    double cut = uniform_real(rng, ranges[c].first, ranges[c].second);
    if (cut <= ranges[c].first) cut = std::nextafter(ranges[c].first, ranges[c].second);

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) (sample[i][feature] < cut ? left : right).push_back(i);
    tree[id].feature = static_cast<std::int32_t>(feature);
    tree[id].cut = cut;
    const std::int32_t l = grow(tree, sample, left, height + 1, limit, rng);
    const std::int32_t r = grow(tree, sample, right, height + 1, limit, rng);
    tree[id].left = l;
    tree[id].right = r;
    return id;
  }

  template <class T>
  static double path_length(const Tree& tree, const CsrMatrix<T>& x, std::size_t r) {
    std::int32_t n = 0;
    int depth = 0;
    while (tree[n].feature >= 0) {
      const auto f = static_cast<std::size_t>(tree[n].feature);
      const double v = f < x.cols() ? static_cast<double>(x.at(r, f)) : 0.0;
      n = v < tree[n].cut ? tree[n].left : tree[n].right;
      ++depth;
    }
    return depth + iforest_c(static_cast<double>(tree[n].size));
  }
};

}  // namespace loglead
