#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "loglead/core/error.hpp"
#include "loglead/detectors/decision_tree.hpp"
#include "loglead/detectors/eval.hpp"
#include "loglead/detectors/isolation_forest.hpp"
#include "loglead/detectors/kmeans.hpp"
#include "loglead/detectors/logistic_regression.hpp"
#include "loglead/detectors/token_detectors.hpp"

namespace loglead {

enum class DetectorKind { lr, dt, kmeans, iforest, oov, rarity };

inline std::string_view to_string(DetectorKind k) {
  switch (k) {
    case DetectorKind::lr: return "lr";
    case DetectorKind::dt: return "dt";
    case DetectorKind::kmeans: return "kmeans";
    case DetectorKind::iforest: return "iforest";
    case DetectorKind::oov: return "oov";
    case DetectorKind::rarity: return "rarity";
  }
  return "?";
}

inline DetectorKind parse_detector_kind(std::string_view s) {
  for (auto k : {DetectorKind::lr, DetectorKind::dt, DetectorKind::kmeans, DetectorKind::iforest, DetectorKind::oov,
                 DetectorKind::rarity}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown detector '" + std::string(s) + "'");
}

inline bool is_supervised(DetectorKind k) { return k == DetectorKind::lr || k == DetectorKind::dt; }
/// OOV and rarity work on token documents rather than a feature matrix.
inline bool uses_documents(DetectorKind k) { return k == DetectorKind::oov || k == DetectorKind::rarity; }

inline constexpr double kDefaultContamination = 0.03;

/// Score cut that flags the top `fraction` of `scores` under the rule
/// score > cut. Flags ceil(fraction * N) rows when scores are distinct; ties
/// at the cut are all left unflagged.
inline double contamination_threshold(std::span<const double> scores, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("contamination must be in (0, 1)");
  if (scores.empty()) throw std::invalid_argument("contamination_threshold: no scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  const auto flagged = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
  if (flagged == n) return std::nextafter(sorted.front(), -INFINITY);
  return sorted[n - flagged - 1];
}

/// A fitted detector. Rows are predicted anomalous iff score > decision_threshold.
struct DetectorModel {
  using Fitted = std::variant<LogisticRegression, DecisionTree, KMeans, IsolationForest, OovDetector, RarityModel>;

  DetectorKind kind = DetectorKind::lr;
  Fitted fitted;
  double decision_threshold = 0.5;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  std::vector<double> scores(const FeatureMatrix& x) const {
    return std::visit(
        [&](const auto& m) -> std::vector<double> {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, OovDetector> || std::is_same_v<M, RarityModel>) {
            throw std::logic_error(std::string(to_string(kind)) + " scores token documents, not a feature matrix");
          } else {
            return m.scores(x);
          }
        },
        fitted);
  }

  template <class Docs>
  std::vector<double> document_scores(const Docs& docs) const {
    if (const auto* m = std::get_if<OovDetector>(&fitted)) return m->scores(docs);
    if (const auto* m = std::get_if<RarityModel>(&fitted)) return m->scores(docs);
    throw std::logic_error(std::string(to_string(kind)) + " scores a feature matrix, not token documents");
  }

  Labels labels_from(std::span<const double> scores) const {
    Labels out;
    out.reserve(scores.size());
    for (double s : scores) out.push_back(s > decision_threshold ? 1 : 0);
    return out;
  }

  nlohmann::json to_json() const {
    return {{"kind", to_string(kind)},
            {"decision_threshold", decision_threshold},
            {"seed", seed},
            {"parameters", std::visit([](const auto& m) { return m.to_json(); }, fitted)}};
  }
};

inline DetectorModel train_supervised(const FeatureMatrix& x, std::span<const std::uint8_t> y, DetectorKind kind,
                                      std::uint64_t seed) {
  DetectorModel out;
  out.kind = kind;
  out.seed = seed;
  if (kind == DetectorKind::lr) {
    out.fitted = LogisticRegression::train(x, y);
    out.decision_threshold = LogisticRegressionConfig{}.threshold;
  } else if (kind == DetectorKind::dt) {
    auto tree = DecisionTree::train(x, y);
    out.warnings = tree.warnings;
    out.decision_threshold = tree.config.threshold;
    out.fitted = std::move(tree);
  } else {
    throw std::invalid_argument("train_supervised: " + std::string(to_string(kind)) + " is not supervised");
  }
  return out;
}

/// Fits kmeans or iforest; the decision threshold flags the top
/// `contamination` fraction of training scores.
inline DetectorModel train_unsupervised(const FeatureMatrix& x, DetectorKind kind, std::uint64_t seed,
                                        double contamination = kDefaultContamination) {
  if (x.rows() < 2) throw std::invalid_argument("train_unsupervised: needs at least 2 rows");
  DetectorModel out;
  out.kind = kind;
  out.seed = seed;
  if (kind == DetectorKind::kmeans) {
    KMeansConfig cfg;
    cfg.seed = seed;
    out.fitted = KMeans::train(x, cfg);
  } else if (kind == DetectorKind::iforest) {
    IsolationForestConfig cfg;
    cfg.seed = seed;
    out.fitted = IsolationForest::train(x, cfg);
  } else {
    throw std::invalid_argument("train_unsupervised: " + std::string(to_string(kind)) + " is not a matrix detector");
  }
  const auto s = out.scores(x);
  out.decision_threshold = contamination_threshold(s, contamination);
  return out;
}

/// OOV uses the fixed `oov_threshold`; rarity derives its threshold from
/// the training-score contamination quantile.
template <class Docs>
DetectorModel train_document_detector(const Docs& train_docs, DetectorKind kind, double oov_threshold = 0.0,
                                      double contamination = kDefaultContamination) {
  DetectorModel out;
  out.kind = kind;
  if (kind == DetectorKind::oov) {
    out.fitted = OovDetector::train(train_docs, oov_threshold);
    out.decision_threshold = oov_threshold;
  } else if (kind == DetectorKind::rarity) {
    auto m = RarityModel::train(train_docs);
    const auto s = m.scores(train_docs);
    out.decision_threshold = s.empty() ? 0.0 : contamination_threshold(s, contamination);
    out.fitted = std::move(m);
  } else {
    throw std::invalid_argument("train_document_detector: " + std::string(to_string(kind)) + " needs a feature matrix");
  }
  return out;
}

}  // namespace loglead
