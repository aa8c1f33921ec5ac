#pragma once

#include <cmath>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "loglead/detectors/eval.hpp"
#include "loglead/features/vocabulary.hpp"

namespace loglead {

/// Scores a document by the fraction of its tokens never seen in training.
/// Empty documents score 0. Anomaly iff score > threshold.
class OovDetector {
 public:
  Vocabulary vocabulary;
  double threshold = 0.0;

  template <class Docs>
  static OovDetector train(const Docs& train_docs, double threshold = 0.0) {
    if (threshold < 0) throw std::invalid_argument("oov: threshold must be >= 0");
    return OovDetector{fit_vocabulary(train_docs, 1), threshold};
  }

  template <class Doc>
  double score(const Doc& doc) const {
    std::size_t len = 0, unseen = 0;
    for (const auto& token : doc) {
      ++len;
      if (!vocabulary.contains(std::string_view(token))) ++unseen;
    }
    return len == 0 ? 0.0 : static_cast<double>(unseen) / static_cast<double>(len);
  }

  template <class Docs>
  std::vector<double> scores(const Docs& docs) const {
    std::vector<double> out;
    out.reserve(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) out.push_back(score(docs[d]));
    return out;
  }

  template <class Docs>
  Labels predict(const Docs& docs) const {
    Labels out;
    for (double s : scores(docs)) out.push_back(s > threshold ? 1 : 0);
    return out;
  }

  nlohmann::json to_json() const { return {{"vocabulary", vocabulary.terms()}}; }
};

/// Mean smoothed negative log-frequency of a document's tokens:
///   (1/len) * sum -log((count(t) + 1) / (T + V))
/// with T the number of training tokens and V the training vocabulary size.
/// Unseen tokens have count 0. Empty documents score 0.
class RarityModel {
 public:
  Vocabulary vocabulary;
  std::uint64_t total_tokens = 0;

  template <class Docs>
  static RarityModel train(const Docs& train_docs) {
    RarityModel m{fit_vocabulary(train_docs, 1), 0};
    for (auto f : m.vocabulary.frequencies()) m.total_tokens += f;
    return m;
  }

  double denominator() const { return static_cast<double>(total_tokens + vocabulary.size()); }

  template <class Doc>
  double score(const Doc& doc) const {
    const double denom = denominator();
    const auto& freq = vocabulary.frequencies();
    double sum = 0.0;
    std::size_t len = 0;
    for (const auto& token : doc) {
      ++len;
      const auto idx = vocabulary.index_of(std::string_view(token));
      const double count = idx ? static_cast<double>(freq[*idx]) : 0.0;
      sum -= std::log((count + 1.0) / denom);
    }
    return len == 0 ? 0.0 : sum / static_cast<double>(len);
  }

  template <class Docs>
  std::vector<double> scores(const Docs& docs) const {
    std::vector<double> out;
    out.reserve(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) out.push_back(score(docs[d]));
    return out;
  }

  nlohmann::json to_json() const {
    return {{"vocabulary", vocabulary.terms()}, {"frequencies", vocabulary.frequencies()}, {"total_tokens", total_tokens}};
  }
};

}  // namespace loglead
