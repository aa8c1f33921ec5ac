#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "loglead/core/error.hpp"
#include "loglead/detectors/eval.hpp"
#include "loglead/features/sparse_matrix.hpp"

namespace loglead {

struct LogisticRegressionConfig {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  double tolerance = 1e-6;  // stop when an epoch lowers the loss by less than this
  int max_epochs = 1000;
  double threshold = 0.5;
};

namespace detail {

inline double log1p_exp(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }
inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace detail

/// Mean log-loss plus (l2/2)|w|^2 over a sparse design matrix.
/// Parameters are laid out as [w_0 .. w_{d-1}, bias].
class LogisticObjective {
 public:
  LogisticObjective(const CsrMatrix<double>& x, std::span<const std::uint8_t> y, double l2)
      : x_(x), y_(y), l2_(l2) {}

  std::size_t dimension() const { return x_.cols() + 1; }

  double loss(std::span<const double> params) const {
    const std::size_t d = x_.cols();
    double total = 0.0;
    for (std::size_t i = 0; i < x_.rows(); ++i) {
      const double z = margin(params, i);
      total += detail::log1p_exp(z) - (y_[i] ? z : 0.0);
    }
    double reg = 0.0;
    for (std::size_t j = 0; j < d; ++j) reg += params[j] * params[j];
    return total / static_cast<double>(x_.rows()) + 0.5 * l2_ * reg;
  }

  void gradient(std::span<const double> params, std::span<double> out) const {
    const std::size_t d = x_.cols();
    std::fill(out.begin(), out.end(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(x_.rows());
    for (std::size_t i = 0; i < x_.rows(); ++i) {
      const double r = (detail::sigmoid(margin(params, i)) - (y_[i] ? 1.0 : 0.0)) * inv_n;
      auto idx = x_.row_indices(i);
      auto val = x_.row_values(i);
      for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] += r * val[k];
      out[d] += r;
    }
    for (std::size_t j = 0; j < d; ++j) out[j] += l2_ * params[j];
  }

 private:
  double margin(std::span<const double> params, std::size_t i) const {
    double z = params[x_.cols()];
    auto idx = x_.row_indices(i);
    auto val = x_.row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) z += params[idx[k]] * val[k];
    return z;
  }

  const CsrMatrix<double>& x_;
  std::span<const std::uint8_t> y_;
  double l2_;
};

/// L2-regularized logistic regression, full-batch gradient descent.
///
/// Features are divided by their training max-abs value. Each epoch takes a
/// step of learning_rate; if that step would raise the loss it is halved
/// until it does not, so the loss sequence is non-increasing.
class LogisticRegression {
 public:
  LogisticRegressionConfig config;
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> scale;  // per-feature divisor
  std::vector<double> loss_history;

  template <class T>
  static CsrMatrix<double> scaled(const CsrMatrix<T>& x, std::span<const double> scale) {
    CsrMatrix<double> out(x.cols());
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      auto idx = x.row_indices(r);
      auto val = x.row_values(r);
      entries.clear();
      for (std::size_t k = 0; k < idx.size(); ++k)
        entries.emplace_back(idx[k], static_cast<double>(val[k]) / scale[idx[k]]);
      out.push_row(entries);
    }
    return out;
  }

  template <class T>
  static std::vector<double> max_abs(const CsrMatrix<T>& x) {
    std::vector<double> s(x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      auto idx = x.row_indices(r);
      auto val = x.row_values(r);
      for (std::size_t k = 0; k < idx.size(); ++k) s[idx[k]] = std::max(s[idx[k]], std::abs(static_cast<double>(val[k])));
    }
    for (auto& v : s)
      if (v == 0.0) v = 1.0;
    return s;
  }

  template <class T>
  static LogisticRegression train(const CsrMatrix<T>& x, std::span<const std::uint8_t> y,
                                  const LogisticRegressionConfig& cfg = {}) {
    if (y.size() != x.rows()) throw std::invalid_argument("logistic regression: label count != rows");
    const auto positives = std::count_if(y.begin(), y.end(), [](auto v) { return v != 0; });
    if (positives == 0 || static_cast<std::size_t>(positives) == y.size()) {
      throw TrainingError("logistic regression needs both classes in the training set");
    }
    LogisticRegression m;
    m.config = cfg;
    m.scale = max_abs(x);
    const CsrMatrix<double> xs = scaled(x, m.scale);
    const LogisticObjective objective(xs, y, cfg.l2);

    const std::size_t dim = objective.dimension();
    std::vector<double> params(dim, 0.0), grad(dim), trial(dim);
    double loss = objective.loss(params);
    m.loss_history.push_back(loss);
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
      objective.gradient(params, grad);
      double step = cfg.learning_rate;
      double next = loss;
      bool moved = false;
      for (int halvings = 0; halvings < 40; ++halvings, step *= 0.5) {
        for (std::size_t j = 0; j < dim; ++j) trial[j] = params[j] - step * grad[j];
        next = objective.loss(trial);
        if (next <= loss) {
          moved = true;
          break;
        }
      }
      if (!moved) break;
      params.swap(trial);
      const double improvement = loss - next;
      loss = next;
      m.loss_history.push_back(loss);
      if (improvement < cfg.tolerance) break;
    }
    m.weights.assign(params.begin(), params.end() - 1);
    m.bias = params.back();
    return m;
  }

  /// P(anomaly) per row.
  template <class T>
  std::vector<double> scores(const CsrMatrix<T>& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
      double z = bias;
      auto idx = x.row_indices(r);
      auto val = x.row_values(r);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] < weights.size()) z += weights[idx[k]] * static_cast<double>(val[k]) / scale[idx[k]];
      }
      out[r] = detail::sigmoid(z);
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
    return {{"learning_rate", config.learning_rate}, {"l2", config.l2},         {"tolerance", config.tolerance},
            {"max_epochs", config.max_epochs},       {"weights", weights},      {"bias", bias},
            {"scale", scale},                        {"epochs_run", loss_history.size() - 1}};
  }

  static LogisticRegression from_json(const nlohmann::json& j, double threshold) {
    LogisticRegression m;
    m.config.learning_rate = j.at("learning_rate");
    m.config.l2 = j.at("l2");
    m.config.tolerance = j.at("tolerance");
    m.config.max_epochs = j.at("max_epochs");
    m.config.threshold = threshold;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias");
    m.scale = j.at("scale").get<std::vector<double>>();
    return m;
  }
};

}  // namespace loglead
