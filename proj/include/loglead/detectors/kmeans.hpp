#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "loglead/core/random.hpp"
#include "loglead/features/sparse_matrix.hpp"

namespace loglead {

struct KMeansConfig {
  std::size_t k = 2;
  int max_iterations = 300;
  std::uint64_t seed = 0;
};

/// Lloyd's k-means with greedy farthest-point seeding: the first centroid is
/// a uniformly drawn row, each further one the row farthest from all chosen
/// centroids (lowest row index on ties). Anomaly score is the Euclidean
/// distance to the nearest centroid.
class KMeans {
 public:
  KMeansConfig config;
  std::vector<std::vector<double>> centroids;
  int iterations = 0;

  template <class T>
  static KMeans train(const CsrMatrix<T>& x, const KMeansConfig& cfg = {}) {
    if (x.rows() < 2) throw std::invalid_argument("kmeans: needs at least 2 rows");
    if (cfg.k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    KMeans m;
    m.config = cfg;
    const std::size_t n = x.rows(), k = std::min(cfg.k, x.rows());
    std::vector<std::vector<double>> rows(n);
    for (std::size_t r = 0; r < n; ++r) rows[r] = x.dense_row(r);

    Rng rng(cfg.seed);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    std::size_t pick = uniform_index(rng, n);
    for (std::size_t c = 0; c < k; ++c) {
      m.centroids.push_back(rows[pick]);
      std::size_t far = 0;
      for (std::size_t r = 0; r < n; ++r) {
        nearest[r] = std::min(nearest[r], squared_distance(rows[r], m.centroids.back()));
        if (nearest[r] > nearest[far]) far = r;
      }
      pick = far;
    }

    std::vector<std::size_t> assign(n, k);
    for (m.iterations = 0; m.iterations < cfg.max_iterations; ++m.iterations) {
      bool changed = false;
      for (std::size_t r = 0; r < n; ++r) {
        const std::size_t c = m.nearest_centroid(rows[r]);
        if (c != assign[r]) {
          assign[r] = c;
          changed = true;
        }
      }
      if (!changed) break;
      std::vector<std::vector<double>> sums(k, std::vector<double>(x.cols(), 0.0));
      std::vector<std::size_t> sizes(k, 0);
      for (std::size_t r = 0; r < n; ++r) {
        ++sizes[assign[r]];
        for (std::size_t j = 0; j < x.cols(); ++j) sums[assign[r]][j] += rows[r][j];
      }
      for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] == 0) continue;  // empty cluster keeps its centroid
        for (auto& v : sums[c]) v /= static_cast<double>(sizes[c]);
        m.centroids[c] = std::move(sums[c]);
      }
    }
    return m;
  }

  template <class T>
  std::vector<double> scores(const CsrMatrix<T>& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const auto row = dense(x, r);
      out[r] = std::sqrt(squared_distance(row, centroids[nearest_centroid(row)]));
    }
    return out;
  }

  std::size_t nearest_centroid(const std::vector<double>& row) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = squared_distance(row, centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    return best;
  }

  static double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double d = a[j] - b[j];
      s += d * d;
    }
    return s;
  }

  nlohmann::json to_json() const {
    return {{"k", config.k}, {"max_iterations", config.max_iterations}, {"centroids", centroids}, {"iterations", iterations}};
  }

  static KMeans from_json(const nlohmann::json& j) {
    KMeans m;
    m.config.k = j.at("k");
    m.config.max_iterations = j.at("max_iterations");
    m.centroids = j.at("centroids").get<std::vector<std::vector<double>>>();
    m.iterations = j.value("iterations", 0);
    return m;
  }

 private:
  // Test rows may come from a matrix with fewer columns than the training one.
  template <class T>
  std::vector<double> dense(const CsrMatrix<T>& x, std::size_t r) const {
    std::vector<double> row(centroids.front().size(), 0.0);
    auto idx = x.row_indices(r);
    auto val = x.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k)
      if (idx[k] < row.size()) row[idx[k]] = static_cast<double>(val[k]);
    return row;
  }
};

}  // namespace loglead
