#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace loglead {

/// Per-row labels, 1 = anomaly (the positive class), 0 = normal.
using Labels = std::vector<std::uint8_t>;

struct EvalReport {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1_binary = 0.0;
  std::optional<double> auc_roc;
  std::map<std::string, double> wall_clock_ms;

  std::uint64_t total() const { return tp + fp + fn + tn; }

  nlohmann::json to_json(bool include_timings = true) const {
    nlohmann::json j = {{"tp", tp},
                        {"fp", fp},
                        {"fn", fn},
                        {"tn", tn},
                        {"accuracy", accuracy},
                        {"precision", precision},
                        {"recall", recall},
                        {"f1_binary", f1_binary},
                        {"auc_roc", auc_roc ? nlohmann::json(*auc_roc) : nlohmann::json(nullptr)}};
    if (include_timings) j["wall_clock_ms"] = wall_clock_ms;
    return j;
  }

  static std::string csv_header() { return "name,tp,fp,fn,tn,accuracy,f1_binary,auc_roc"; }

  std::string csv_row(const std::string& name) const {
    std::ostringstream os;
    os.precision(6);
    os << name << ',' << tp << ',' << fp << ',' << fn << ',' << tn << ',' << std::fixed << accuracy << ','
       << f1_binary << ',';
    if (auc_roc) os << *auc_roc;
    return os.str();
  }
};

/// Area under the ROC curve via the Mann-Whitney rank statistic, tied
/// scores sharing their average rank. nullopt when a class is missing.
inline std::optional<double> auc_roc(std::span<const double> scores, std::span<const std::uint8_t> truth) {
  if (scores.size() != truth.size()) throw std::invalid_argument("auc_roc: length mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum_pos = 0.0;
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (truth[order[k]]) {
        rank_sum_pos += avg_rank;
        ++pos;
      }
    }
    i = j;
  }
  const std::uint64_t neg = n - pos;
  if (pos == 0 || neg == 0) return std::nullopt;
  const double p = static_cast<double>(pos);
  return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

/// Confusion counts and binary (anomaly-class) metrics. F1 ignores true
/// negatives and is 0 when there are no predicted or no actual anomalies.
inline EvalReport evaluate(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> truth,
                           std::optional<std::span<const double>> scores = std::nullopt) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("evaluate: length mismatch");
  if (scores && scores->size() != truth.size()) throw std::invalid_argument("evaluate: score length mismatch");
  EvalReport r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] != 0, t = truth[i] != 0;
    if (p && t) ++r.tp;
    else if (p && !t) ++r.fp;
    else if (!p && t) ++r.fn;
    else ++r.tn;
  }
  const double tp = static_cast<double>(r.tp);
  if (r.total() != 0) r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(r.total());
  if (r.tp + r.fp != 0) r.precision = tp / static_cast<double>(r.tp + r.fp);
  if (r.tp + r.fn != 0) r.recall = tp / static_cast<double>(r.tp + r.fn);
  // 2PR/(P+R) == 2tp/(2tp+fp+fn)
  if (r.tp != 0) r.f1_binary = 2.0 * tp / static_cast<double>(2 * r.tp + r.fp + r.fn);
  if (scores) r.auc_roc = auc_roc(*scores, truth);
  return r;
}

}  // namespace loglead
