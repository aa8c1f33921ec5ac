#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "loglead/detectors/eval.hpp"
#include "loglead/features/sparse_matrix.hpp"

namespace loglead {

struct DecisionTreeConfig {
  int max_depth = 20;
  double threshold = 0.5;
};

/// Binary CART classifier, Gini impurity. Rows with x[feature] <= cut go
/// left. Grows until nodes are pure, max_depth is reached, or no split
/// lowers impurity. Ties between candidate splits go to the lowest feature
/// index, then the lowest cut.
class DecisionTree {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 for leaves
    double cut = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double anomaly_rate = 0.0;  // fraction of anomalous training rows reaching the node
    std::uint32_t samples = 0;
  };

  DecisionTreeConfig config;
  std::vector<Node> nodes;
  std::vector<std::string> warnings;

  int depth() const { return depth_from(0); }

  template <class T>
  static DecisionTree train(const CsrMatrix<T>& x, std::span<const std::uint8_t> y, const DecisionTreeConfig& cfg = {}) {
    if (y.size() != x.rows()) throw std::invalid_argument("decision tree: label count != rows");
    DecisionTree tree;
    tree.config = cfg;
    Builder<T> b(x, y, tree);
    std::vector<std::size_t> rows(x.rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    const auto positives = std::count_if(y.begin(), y.end(), [](auto v) { return v != 0; });
    if (positives == 0 || static_cast<std::size_t>(positives) == y.size()) {
      tree.warnings.push_back("decision tree: training labels are constant; model is a constant predictor");
    }
    b.grow(rows, 0);
    return tree;
  }

  template <class T>
  std::vector<double> scores(const CsrMatrix<T>& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
      std::int32_t n = 0;
      while (nodes[n].feature >= 0) {
        const double v = static_cast<double>(x.at(r, static_cast<std::size_t>(nodes[n].feature)));
        n = v <= nodes[n].cut ? nodes[n].left : nodes[n].right;
      }
      out[r] = nodes[n].anomaly_rate;
    }
    return out;
  }

  template <class T>
  Labels predict(const CsrMatrix<T>& x) const {
    Labels out;
    for (double s : scores(x)) out.push_back(s > config.threshold ? 1 : 0);
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& n : nodes) {
      arr.push_back({n.feature, n.cut, n.left, n.right, n.anomaly_rate, n.samples});
    }
    return {{"max_depth", config.max_depth}, {"nodes", std::move(arr)}};
  }

  static DecisionTree from_json(const nlohmann::json& j, double threshold) {
    DecisionTree t;
    t.config.max_depth = j.at("max_depth");
    t.config.threshold = threshold;
    for (const auto& a : j.at("nodes")) {
      t.nodes.push_back({a[0].get<std::int32_t>(), a[1].get<double>(), a[2].get<std::int32_t>(),
                         a[3].get<std::int32_t>(), a[4].get<double>(), a[5].get<std::uint32_t>()});
    }
    return t;
  }

 private:
  int depth_from(std::int32_t n) const {
    if (nodes.empty() || nodes[n].feature < 0) return 0;
    return 1 + std::max(depth_from(nodes[n].left), depth_from(nodes[n].right));
  }

  template <class T>
  struct Builder {
    // Column-major copy of x for per-feature scans.
    struct Entry {
      std::uint32_t row;
      double value;
    };

    Builder(const CsrMatrix<T>& x, std::span<const std::uint8_t> y, DecisionTree& tree)
        : y_(y), tree_(tree), columns_(x.cols()), member_(x.rows(), 0) {
      for (std::size_t r = 0; r < x.rows(); ++r) {
        auto idx = x.row_indices(r);
        auto val = x.row_values(r);
        for (std::size_t k = 0; k < idx.size(); ++k)
          columns_[idx[k]].push_back({static_cast<std::uint32_t>(r), static_cast<double>(val[k])});
      }
    }

    static double gini(double pos, double n) {
      if (n <= 0) return 0.0;
      const double p = pos / n;
      return 2.0 * p * (1.0 - p);
    }

    std::int32_t grow(const std::vector<std::size_t>& rows, int depth) {
      const auto id = static_cast<std::int32_t>(tree_.nodes.size());
      tree_.nodes.emplace_back();
      double pos = 0;
      for (std::size_t r : rows) pos += y_[r] ? 1 : 0;
      const double n = static_cast<double>(rows.size());
      tree_.nodes[id].anomaly_rate = n > 0 ? pos / n : 0.0;
      tree_.nodes[id].samples = static_cast<std::uint32_t>(rows.size());
      if (pos == 0 || pos == n || depth >= tree_.config.max_depth) return id;

      const double parent = gini(pos, n);
      double best_gain = 1e-12;
      std::int32_t best_feature = -1;
      double best_cut = 0.0;
      for (std::size_t r : rows) member_[r] = 1;
      std::vector<Entry> present;
      for (std::size_t f = 0; f < columns_.size(); ++f) {
        present.clear();
        for (const Entry& e : columns_[f])
          if (member_[e.row]) present.push_back(e);
        if (present.empty()) continue;
        std::sort(present.begin(), present.end(), [](const Entry& a, const Entry& b) {
          return a.value < b.value || (a.value == b.value && a.row < b.row);
        });
        // Rows absent from the column hold 0 and sort before every stored value.
        const double zeros = n - static_cast<double>(present.size());
        double zeros_pos = pos;
        for (const Entry& e : present) zeros_pos -= y_[e.row] ? 1 : 0;

        double left_n = zeros, left_pos = zeros_pos;
        double prev = 0.0;
        bool have_prev = zeros > 0;
        for (std::size_t k = 0; k < present.size();) {
          const double v = present[k].value;
          if (have_prev && v > prev) {
            const double right_n = n - left_n, right_pos = pos - left_pos;
            const double child = (left_n * gini(left_pos, left_n) + right_n * gini(right_pos, right_n)) / n;
            const double gain = parent - child;
            if (gain > best_gain) {
              best_gain = gain;
              best_feature = static_cast<std::int32_t>(f);
              best_cut = (prev + v) / 2.0;
            }
          }
          for (; k < present.size() && present[k].value == v; ++k) {
            left_n += 1;
            left_pos += y_[present[k].row] ? 1 : 0;
          }
          prev = v;
          have_prev = true;
        }
      }
      for (std::size_t r : rows) member_[r] = 0;
      if (best_feature < 0) return id;

      std::vector<std::size_t> left, right;
      for (std::size_t r : rows) member_[r] = 1;
      std::vector<std::uint8_t> goes_right(member_.size(), 0);
      for (const Entry& e : columns_[static_cast<std::size_t>(best_feature)])
        if (member_[e.row] && e.value > best_cut) goes_right[e.row] = 1;
      for (std::size_t r : rows) member_[r] = 0;
      for (std::size_t r : rows) (goes_right[r] ? right : left).push_back(r);

      tree_.nodes[id].feature = best_feature;
      tree_.nodes[id].cut = best_cut;
      const std::int32_t l = grow(left, depth + 1);
      const std::int32_t rt = grow(right, depth + 1);
      tree_.nodes[id].left = l;
      tree_.nodes[id].right = rt;
      return id;
    }

    std::span<const std::uint8_t> y_;
    DecisionTree& tree_;
    std::vector<std::vector<Entry>> columns_;
    std::vector<std::uint8_t> member_;
  };
};

}  // namespace loglead
