#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "loglead/core/error.hpp"
#include "loglead/core/split.hpp"
#include "loglead/core/table_io.hpp"
#include "loglead/core/validate.hpp"
#include "loglead/detectors/detector.hpp"
#include "loglead/enhancers/aggregate.hpp"
#include "loglead/enhancers/masking.hpp"
#include "loglead/enhancers/ngram.hpp"
#include "loglead/enhancers/parse.hpp"
#include "loglead/enhancers/tokenize.hpp"
#include "loglead/features/sparse_matrix.hpp"
#include "loglead/features/vocabulary.hpp"
#include "loglead/loaders/loader.hpp"
#include "loglead/pipeline/config.hpp"

namespace loglead {

/// Per-phase wall-clock milliseconds, keyed by phase name.
using PhaseTimings = std::map<std::string, double>;

namespace detail {

/// Runs one named phase, adds its duration to `timings`, and tags failures
/// with the phase name. Configuration and I/O errors pass through untouched
/// so callers can map them to their own exit codes.
template <class Fn>
auto run_stage(const std::string& name, PhaseTimings& timings, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  struct Record {
    const std::string& name;
    PhaseTimings& timings;
    std::chrono::steady_clock::time_point start;
    ~Record() {
      timings[name] += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  } record{name, timings, start};
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const IoError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace detail

struct EnhancedData {
  EventTable events;
  std::optional<SequenceTable> sequences;
  std::optional<TemplateStore> templates;
  std::optional<NGramModel> ngram;
  std::vector<std::string> warnings;
  LoadDiagnostics diagnostics;
};

namespace detail {

inline const TextColumn& message_source(const EventTable& events) {
  if (events.has_column(col::normalized)) return events.get<TextColumn>(col::normalized);
  return events.get<TextColumn>(col::message);
}

inline void apply_ngram(EnhancedData& d, const PipelineConfig& config) {
  if (d.sequences && d.sequences->has_column(col::event_ids)) {
    const auto& lists = d.sequences->get<IntListColumn>(col::event_ids);
    NGramModel model = ngram_train(lists.rows(), config.ngram_n);
    Int64Column low;
    for (std::size_t i = 0; i < lists.size(); ++i) {
      const auto s = ngram_score(model, lists[i], config.ngram_threshold);
      std::int64_t n = 0;
      for (double p : s.probabilities) n += p < config.ngram_threshold ? 1 : 0;
      low.push_back(n);
    }
    d.sequences = d.sequences->with_column("ngram_low_events", std::move(low));
    d.ngram = std::move(model);
    return;
  }
  // No sequences yet: the whole event stream is one sequence.
  const auto& ids = d.events.get<Int64Column>(col::event_id);
  std::vector<std::int64_t> stream;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!ids.is_null(i)) stream.push_back(ids[i]);
  const std::vector<std::vector<std::int64_t>> one{stream};
  NGramModel model = ngram_train(one, config.ngram_n);
  const auto s = ngram_score(model, stream, config.ngram_threshold);
  BoolColumn rare;
  std::size_t k = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids.is_null(i)) {
      rare.push_null();
    } else {
      rare.push_back(s.probabilities[k++] < config.ngram_threshold);
    }
  }
  d.events = d.events.with_column("e_ngram_rare", std::move(rare));
  d.ngram = std::move(model);
}

}  // namespace detail

/// Loads the configured log and runs the enhancer chain in order.
inline EnhancedData load_and_enhance(const PipelineConfig& config, PhaseTimings& timings) {
  config.validate();
  EnhancedData d;
  const MaskingRules rules = config.masking_rules ? read_masking_rules(*config.masking_rules) : default_masking_rules();

  std::optional<SequenceTable> loader_sequences;
  detail::run_stage("load", timings, [&] {
    if (!std::filesystem::exists(config.loader.log_path)) {
      throw IoError("log not found: " + config.loader.log_path.string());
    }
    if (config.loader.label_path && !std::filesystem::exists(*config.loader.label_path)) {
      throw IoError("label file not found: " + config.loader.label_path->string());
    }
    LoadResult r = load(config.loader);
    d.events = std::move(r.events);
    loader_sequences = std::move(r.sequences);
    d.diagnostics = std::move(r.diagnostics);
    for (const auto& w : d.diagnostics.warnings) d.warnings.push_back(w);
    if (d.diagnostics.dropped_lines != 0) {
      d.warnings.push_back(std::to_string(d.diagnostics.dropped_lines) + " unparseable line(s) dropped");
    }
    const auto report = validate_event_table(d.events);
    for (const auto& w : report.warnings) d.warnings.push_back("validation: " + w);
    if (d.events.empty()) d.warnings.push_back("input has no events");
    return 0;
  });

  for (EnhancerStep step : config.chain) {
    detail::run_stage("enhance:" + std::string(to_string(step)), timings, [&] {
      switch (step) {
        case EnhancerStep::normalize:
          d.events = d.events.with_column(std::string(col::normalized),
                                          normalize(d.events.get<TextColumn>(col::message), rules));
          break;
        case EnhancerStep::tokenize:
          d.events = d.events.with_column(std::string(col::words), tokenize(detail::message_source(d.events)));
          break;
        case EnhancerStep::drain:
        case EnhancerStep::spell:
        case EnhancerStep::lenma: {
          const auto& messages = detail::message_source(d.events);
          ParseResult r = step == EnhancerStep::drain   ? drain_parse(messages, config.drain)
                          : step == EnhancerStep::spell ? spell_parse(messages, config.spell)
                                                        : lenma_parse(messages, config.lenma);
          d.events = d.events.with_column(std::string(col::event_id), std::move(r.event_ids));
          d.templates = std::move(r.store);
          break;
        }
        case EnhancerStep::ngram: detail::apply_ngram(d, config); break;
        case EnhancerStep::aggregate: {
          const SequenceTable* labels =
              loader_sequences && loader_sequences->has_column(col::label) ? &*loader_sequences : nullptr;
          d.sequences = aggregate_sequences(d.events, labels, &d.warnings);
          break;
        }
      }
      return 0;
    });
  }
  if (!d.sequences && loader_sequences) d.sequences = std::move(loader_sequences);
  return d;
}

struct PipelineResult {
  EvalReport report;
  std::optional<DetectorModel> model;
  EnhancedData data;
  std::vector<std::string> warnings;
  std::filesystem::path output_dir;
};

/// Documents for the configured feature source at the detection level.
inline TextListColumn detection_documents(const PipelineConfig& config, const Table& table) {
  const bool seq = config.level == DetectionLevel::sequence;
  if (config.source == FeatureSource::words) {
    return table.get<TextListColumn>(seq ? col::seq_words : col::words);
  }
  if (seq) return event_id_documents(table.get<IntListColumn>(col::event_ids));
  return event_id_documents(table.get<Int64Column>(col::event_id));
}

inline Labels label_vector(const Table& table) {
  if (!table.has_column(col::label)) throw std::runtime_error("no label column at the detection level");
  const auto& labels = table.get<BoolColumn>(col::label);
  Labels out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = !labels.is_null(i) && labels[i];
  return out;
}

inline std::string report_name(const PipelineConfig& config) {
  const auto p = config.parser();
  return std::string(p ? to_string(*p) : "none") + "+" + std::string(to_string(config.detector));
}

/// load -> enhance -> split -> vectorize -> train -> evaluate, then writes
/// report.json, report.csv, model.json, templates.json (with a parser),
/// ngram.json (with ngram) and the tables into config.output_dir.
inline PipelineResult run_pipeline(const PipelineConfig& config) {
  PipelineResult res;
  PhaseTimings timings;
  res.data = load_and_enhance(config, timings);
  res.warnings = res.data.warnings;
  res.output_dir = config.output_dir;

  const Table& table = config.level == DetectionLevel::sequence
                           ? (res.data.sequences ? *res.data.sequences
                                                 : throw StageError("split", "no sequence table"))
                           : res.data.events;

  if (table.empty()) {
    res.warnings.push_back("nothing to detect on: the detection table is empty");
  } else {
    const auto split = detail::run_stage("split", timings, [&] {
      (void)label_vector(table);
      return split_train_test(table, config.train_fraction, config.seed);
    });
    if (split.train.empty() || split.test.empty()) {
      throw StageError("split", "split left the train or test side empty");
    }

    struct Features {
      TextListColumn train_docs, test_docs;
      Vectorized train, test;
      Labels y_train, y_test;
    };
    const auto f = detail::run_stage("vectorize", timings, [&] {
      Features out;
      out.train_docs = detection_documents(config, split.train);
      out.test_docs = detection_documents(config, split.test);
      const Vocabulary vocab = fit_vocabulary(out.train_docs.rows(), config.min_count);
      out.train = vectorize(out.train_docs.rows(), vocab, config.binary);
      out.test = vectorize(out.test_docs.rows(), vocab, config.binary);
      out.y_train = label_vector(split.train);
      out.y_test = label_vector(split.test);
      return out;
    });

    res.model = detail::run_stage("train", timings, [&] {
      if (uses_documents(config.detector)) {
        return train_document_detector(f.train_docs.rows(), config.detector, config.oov_threshold,
                                       config.contamination);
      }
      if (is_supervised(config.detector)) {
        return train_supervised(f.train.matrix, f.y_train, config.detector, config.seed);
      }
      return train_unsupervised(f.train.matrix, config.detector, config.seed, config.contamination);
    });
    res.model->seed = config.seed;
    for (const auto& w : res.model->warnings) res.warnings.push_back(w);

    res.report = detail::run_stage("evaluate", timings, [&] {
      const auto scores = uses_documents(config.detector) ? res.model->document_scores(f.test_docs.rows())
                                                          : res.model->scores(f.test.matrix);
      const Labels pred = res.model->labels_from(scores);
      return evaluate(pred, f.y_test, std::span<const double>(scores));
    });
  }

  detail::run_stage("write", timings, [&] {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw IoError("cannot create " + config.output_dir.string() + ": " + ec.message());
    auto write_json = [&](const std::string& file, const nlohmann::json& j) {
      std::ofstream os(config.output_dir / file);
      if (!os) throw IoError("cannot write " + (config.output_dir / file).string());
      os << j.dump(2) << '\n';
    };
    write_table_file(config.output_dir / "events.lltable", res.data.events);
    if (res.data.sequences) write_table_file(config.output_dir / "sequences.lltable", *res.data.sequences);
    if (config.write_csv_tables) {
      write_csv_file(config.output_dir / "events.csv", res.data.events);
      if (res.data.sequences) write_csv_file(config.output_dir / "sequences.csv", *res.data.sequences);
    }
    if (res.data.templates) res.data.templates->save(config.output_dir / "templates.json");
    if (res.data.ngram) write_json("ngram.json", res.data.ngram->to_json());
    if (res.model) write_json("model.json", res.model->to_json());
    {
      std::ofstream os(config.output_dir / "report.csv");
      if (!os) throw IoError("cannot write report.csv");
      os << EvalReport::csv_header() << '\n' << res.report.csv_row(report_name(config)) << '\n';
    }
    return 0;
  });
  res.report.wall_clock_ms = timings;
  {
    std::ofstream os(config.output_dir / "report.json");
    if (!os) throw IoError("cannot write report.json");
    os << res.report.to_json().dump(2) << '\n';
  }
  return res;
}

}  // namespace loglead
