#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace loglead {

/// Context padding before the first event of a sequence. Event ids are
/// non-negative, so the sentinel never collides with a real id.
inline constexpr std::int64_t kStartSentinel = -1;

/// Next-event counts over sliding windows of n event ids.
struct NGramModel {
  using Context = std::vector<std::int64_t>;

  int n = 2;
  std::map<Context, std::map<std::int64_t, std::uint64_t>> counts;
  std::map<Context, std::uint64_t> context_totals;
  std::set<std::int64_t> vocabulary;

  /// count(next | context) / count(context); 0 for unseen context or next.
  double probability(const Context& context, std::int64_t next) const {
    auto c = counts.find(context);
    if (c == counts.end()) return 0.0;
    auto e = c->second.find(next);
    if (e == c->second.end()) return 0.0;
    return static_cast<double>(e->second) / static_cast<double>(context_totals.at(context));
  }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [ctx, nexts] : counts)
      for (const auto& [next, cnt] : nexts) rows.push_back({{"context", ctx}, {"next", next}, {"count", cnt}});
    return {{"n", n}, {"counts", std::move(rows)}};
  }
};

/// Exhaustive sliding-window counts; each sequence is padded with n-1
/// start sentinels so the first events get a context too.
template <class Sequences>
NGramModel ngram_train(const Sequences& sequences, int n) {
  if (n < 2) throw std::invalid_argument("ngram: n must be >= 2");
  NGramModel model;
  model.n = n;
  const auto ctx_len = static_cast<std::size_t>(n - 1);
  NGramModel::Context ctx;
  for (const auto& seq : sequences) {
    ctx.assign(ctx_len, kStartSentinel);
    for (std::int64_t next : seq) {
      ++model.counts[ctx][next];
      ++model.context_totals[ctx];
      model.vocabulary.insert(next);
      ctx.erase(ctx.begin());
      ctx.push_back(next);
    }
  }
  return model;
}

struct NGramScore {
  std::vector<double> probabilities;  // one per event
  double anomaly_score = 0.0;         // fraction of events with probability < threshold
};

template <class Sequence>
NGramScore ngram_score(const NGramModel& model, const Sequence& sequence, double threshold = 0.05) {
  NGramScore out;
  NGramModel::Context ctx(static_cast<std::size_t>(model.n - 1), kStartSentinel);
  std::size_t low = 0;
  for (std::int64_t next : sequence) {
    const double p = model.probability(ctx, next);
    out.probabilities.push_back(p);
    if (p < threshold) ++low;
    ctx.erase(ctx.begin());
    ctx.push_back(next);
  }
  if (!out.probabilities.empty()) {
    out.anomaly_score = static_cast<double>(low) / static_cast<double>(out.probabilities.size());
  }
  return out;
}

}  // namespace loglead
