// End-to-end library walk-through on a generated HDFS-style corpus:
// load -> mask -> parse -> aggregate -> bag-of-words -> detect.
//
//   loglead_demo [output-dir]

#include <filesystem>
#include <iostream>

#include "loglead/loglead.hpp"

using namespace loglead;

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : std::filesystem::temp_directory_path() / "loglead_demo";

  SyntheticSpec spec;
  spec.format = SyntheticFormat::hdfs_like;
  spec.templates = 12;
  spec.lines = 20000;
  spec.anomaly_rate = 0.05;
  spec.seed = 7;
  const SyntheticFiles files = write_corpus(generate_corpus(spec), dir);

  LoadResult loaded = load_hdfs(files.log, files.labels);
  EventTable events = loaded.events;
  std::cout << "loaded " << events.num_rows() << " events\n";

  MaskingRules rules;
  rules.emplace_back(R"(blk_-?\d+)", "<BLK>");
  for (auto& r : default_masking_rules()) rules.push_back(r);
  events = events.with_column(std::string(col::normalized), normalize(events.get<TextColumn>(col::message), rules));
  events = events.with_column(std::string(col::words), tokenize(events.get<TextColumn>(col::normalized)));
  ParseResult parsed = drain_parse(events.get<TextColumn>(col::normalized));
  events = events.with_column(std::string(col::event_id), std::move(parsed.event_ids));
  std::cout << "drain found " << parsed.store.size() << " templates\n";

  const SequenceTable sequences = aggregate_sequences(events, &*loaded.sequences);
  const TrainTestSplit split = split_train_test(sequences, 0.5, 1);
  const auto& train_docs = split.train.get<TextListColumn>(col::seq_words);
  const auto& test_docs = split.test.get<TextListColumn>(col::seq_words);
  auto labels = [](const Table& t) {
    const auto& c = t.get<BoolColumn>(col::label);
    Labels y;
    for (std::size_t i = 0; i < c.size(); ++i) y.push_back(c[i] ? 1 : 0);
    return y;
  };
  const Labels y_train = labels(split.train), y_test = labels(split.test);

  const Vocabulary vocab = fit_vocabulary(train_docs.rows());
  const FeatureMatrix x_train = vectorize(train_docs.rows(), vocab).matrix;
  const FeatureMatrix x_test = vectorize(test_docs.rows(), vocab).matrix;

  for (DetectorKind kind : {DetectorKind::lr, DetectorKind::dt}) {
    const DetectorModel m = train_supervised(x_train, y_train, kind, 1);
    const auto scores = m.scores(x_test);
    const EvalReport r = evaluate(m.labels_from(scores), y_test, std::span<const double>(scores));
    std::cout << to_string(kind) << ": f1 " << r.f1_binary << ", auc " << r.auc_roc.value_or(0.0) << '\n';
  }
  const DetectorModel oov = train_document_detector(train_docs.rows(), DetectorKind::oov);
  const auto oov_scores = oov.document_scores(test_docs.rows());
  const EvalReport r = evaluate(oov.labels_from(oov_scores), y_test);
  std::cout << "oov: f1 " << r.f1_binary << '\n';
  return 0;
}
