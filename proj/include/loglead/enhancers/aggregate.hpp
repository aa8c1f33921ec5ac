#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "loglead/core/table.hpp"

namespace loglead {

/// Rolls events up to one row per seq_id (first-appearance order).
///
/// Produces seq_id, label, seq_len, duration (microseconds, max - min
/// timestamp) and, when the corresponding event columns exist, event_ids
/// (from e_event_id) and words (from e_words) concatenated in event order.
///
/// Labels come from `sequence_labels` (a seq_id/label table) when given;
/// ids missing there are labeled normal and counted in `warnings`. Without
/// it, a boolean `label` event column is reduced with "any anomaly".
/// Events with a null seq_id are skipped.
inline SequenceTable aggregate_sequences(const EventTable& events,
                                         const SequenceTable* sequence_labels = nullptr,
                                         std::vector<std::string>* warnings = nullptr) {
  if (!events.has_column(col::seq_id)) {
    throw std::invalid_argument("aggregate_sequences: events have no seq_id column");
  }
  const auto& ids = events.get<TextColumn>(col::seq_id);
  const std::size_t n = events.num_rows();

  std::unordered_map<std::string_view, std::size_t> group_of;
  group_of.reserve(n / 4 + 16);
  std::vector<std::size_t> row_group(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::string_view> keys;
  std::size_t null_ids = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (ids.is_null(r)) {
      ++null_ids;
      continue;
    }
    auto [it, inserted] = group_of.try_emplace(ids[r], keys.size());
    if (inserted) keys.push_back(ids[r]);
    row_group[r] = it->second;
  }
  const std::size_t groups = keys.size();
  if (null_ids != 0 && warnings != nullptr) {
    warnings->push_back(std::to_string(null_ids) + " event(s) without a sequence id were not aggregated");
  }

  // Stable counting sort of rows by group.
  std::vector<std::size_t> start(groups + 1, 0);
  for (std::size_t r = 0; r < n; ++r)
    if (row_group[r] < groups) ++start[row_group[r] + 1];
  for (std::size_t g = 0; g < groups; ++g) start[g + 1] += start[g];
  std::vector<std::size_t> ordered(start.back());
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t r = 0; r < n; ++r)
      if (row_group[r] < groups) ordered[fill[row_group[r]]++] = r;
  }

  TextColumn seq_ids;
  Int64Column seq_len;
  Int64Column duration;
  const TimestampColumn* ts =
      events.has_column(col::timestamp) ? &events.get<TimestampColumn>(col::timestamp) : nullptr;
  for (std::size_t g = 0; g < groups; ++g) {
    seq_ids.push_back(keys[g]);
    seq_len.push_back(static_cast<std::int64_t>(start[g + 1] - start[g]));
    if (ts == nullptr) {
      duration.push_null();
      continue;
    }
    Timestamp lo{std::numeric_limits<std::int64_t>::max()};
    Timestamp hi{std::numeric_limits<std::int64_t>::min()};
    bool any = false;
    for (std::size_t k = start[g]; k < start[g + 1]; ++k) {
      const std::size_t r = ordered[k];
      if (ts->is_null(r)) continue;
      lo = std::min(lo, (*ts)[r]);
      hi = std::max(hi, (*ts)[r]);
      any = true;
    }
    if (any) {
      duration.push_back(hi.micros - lo.micros);
    } else {
      duration.push_null();
    }
  }

  std::vector<std::pair<std::string, Column>> out;
  out.emplace_back(std::string(col::seq_id), std::move(seq_ids));

  if (sequence_labels != nullptr) {
    const auto& lid = sequence_labels->get<TextColumn>(col::seq_id);
    const auto& lval = sequence_labels->get<BoolColumn>(col::label);
    std::unordered_map<std::string_view, bool> lookup;
    lookup.reserve(lid.size());
    for (std::size_t i = 0; i < lid.size(); ++i) lookup.emplace(lid[i], !lval.is_null(i) && lval[i]);
    BoolColumn labels;
    std::size_t unlabeled = 0;
    for (std::size_t g = 0; g < groups; ++g) {
      auto it = lookup.find(keys[g]);
      if (it == lookup.end()) ++unlabeled;
      labels.push_back(it != lookup.end() && it->second);
    }
    if (unlabeled != 0 && warnings != nullptr) {
      warnings->push_back(std::to_string(unlabeled) + " sequence(s) missing from the label source were labeled normal");
    }
    out.emplace_back(std::string(col::label), std::move(labels));
  } else if (events.has_column(col::label)) {
    const auto& ev = events.get<BoolColumn>(col::label);
    BoolColumn labels;
    for (std::size_t g = 0; g < groups; ++g) {
      bool anomaly = false;
      for (std::size_t k = start[g]; k < start[g + 1] && !anomaly; ++k) {
        const std::size_t r = ordered[k];
        anomaly = !ev.is_null(r) && ev[r];
      }
      labels.push_back(anomaly);
    }
    out.emplace_back(std::string(col::label), std::move(labels));
  }

  out.emplace_back(std::string(col::seq_len), std::move(seq_len));
  out.emplace_back(std::string(col::duration), std::move(duration));

  if (events.has_column(col::event_id)) {
    const auto& eid = events.get<Int64Column>(col::event_id);
    IntListColumn lists;
    std::vector<std::int64_t> buf;
    for (std::size_t g = 0; g < groups; ++g) {
      buf.clear();
      for (std::size_t k = start[g]; k < start[g + 1]; ++k)
        if (!eid.is_null(ordered[k])) buf.push_back(eid[ordered[k]]);
      lists.push_back(buf);
    }
    out.emplace_back(std::string(col::event_ids), std::move(lists));
  }
  if (events.has_column(col::words)) {
    const auto& words = events.get<TextListColumn>(col::words);
    TextListColumn lists;
    std::vector<std::string_view> buf;
    for (std::size_t g = 0; g < groups; ++g) {
      buf.clear();
      for (std::size_t k = start[g]; k < start[g + 1]; ++k) {
        const std::size_t r = ordered[k];
        if (words.is_null(r)) continue;
        for (auto w : words[r]) buf.push_back(w);
      }
      lists.push_back(buf);
    }
    out.emplace_back(std::string(col::seq_words), std::move(lists));
  }
  return Table::from_columns(std::move(out));
}

}  // namespace loglead
