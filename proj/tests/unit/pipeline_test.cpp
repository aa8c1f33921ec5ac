#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "test_util.hpp"

using namespace loglead;
using testutil::data;

namespace {

PipelineConfig config_from(const std::string& text, const std::filesystem::path& base = {}) {
  std::istringstream in(text);
  return parse_pipeline_config(in, base);
}

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::string& args, const testutil::TempDir& dir) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + LOGLEAD_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = testutil::read_file(out);
  r.err = testutil::read_file(err);
  return r;
}

std::string quoted(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

nlohmann::json read_json(const std::filesystem::path& p) { return nlohmann::json::parse(testutil::read_file(p)); }

}  // namespace

// --- config ----------------------------------------------------------------

TEST(PipelineConfig, ParsesAllSections) {
  const auto c = config_from(
      "[loader]\nformat = hdfs\nlog = a.log\nlabels = l.csv\n"
      "[enhance]\nchain = normalize, tokenize, spell, ngram, aggregate\ndrain.depth = 5\nspell.tau = 0.7\n"
      "ngram.n = 3\n"
      "[features]\nlevel = sequence\nsource = event_ids\nbinary = true\nmin_count = 2\n"
      "[detector]\nkind = iforest\ncontamination = 0.1\n"
      "[split]\ntrain_fraction = 0.3\nseed = 9\n"
      "[output]\ndir = results\ncsv = yes\n",
      "/base");
  EXPECT_EQ(c.loader.format, LogFormat::hdfs);
  EXPECT_EQ(c.loader.log_path, std::filesystem::path("/base/a.log"));
  EXPECT_EQ(*c.loader.label_path, std::filesystem::path("/base/l.csv"));
  EXPECT_EQ(c.chain.size(), 5u);
  EXPECT_EQ(c.parser(), EnhancerStep::spell);
  EXPECT_EQ(c.drain.depth, 5);
  EXPECT_DOUBLE_EQ(c.spell.tau, 0.7);
  EXPECT_EQ(c.ngram_n, 3);
  EXPECT_EQ(c.source, FeatureSource::event_ids);
  EXPECT_TRUE(c.binary);
  EXPECT_EQ(c.min_count, 2u);
  EXPECT_EQ(c.detector, DetectorKind::iforest);
  EXPECT_DOUBLE_EQ(c.contamination, 0.1);
  EXPECT_DOUBLE_EQ(c.train_fraction, 0.3);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.output_dir, std::filesystem::path("results"));
  EXPECT_TRUE(c.write_csv_tables);
}

TEST(PipelineConfig, NgramWithoutParserFailsBeforeLoading) {
  // The log does not exist; a configuration error must win over an I/O error.
  EXPECT_THROW(config_from("[loader]\nformat = raw\nlog = /nonexistent/x.log\n"
                           "[enhance]\nchain = tokenize, ngram\n[features]\nlevel = event\n"),
               ConfigError);
}

TEST(PipelineConfig, DependencyRules) {
  const std::string hdfs = "[loader]\nformat = hdfs\nlog = x.log\n";
  EXPECT_THROW(config_from(hdfs + "[enhance]\nchain = tokenize\n"), ConfigError);  // sequence level needs aggregate
  EXPECT_THROW(config_from(hdfs + "[enhance]\nchain = tokenize, drain, spell, aggregate\n"), ConfigError);
  EXPECT_THROW(config_from(hdfs + "[enhance]\nchain = tokenize, tokenize, aggregate\n"), ConfigError);
  EXPECT_THROW(config_from(hdfs + "[enhance]\nchain = drain, aggregate\n"), ConfigError);  // words need tokenize
  EXPECT_THROW(config_from(hdfs + "[enhance]\nchain = tokenize, aggregate\n[features]\nsource = event_ids\n"),
               ConfigError);
  EXPECT_THROW(config_from("[loader]\nformat = bgl\nlog = x.log\n[enhance]\nchain = tokenize, aggregate\n"),
               ConfigError);
  EXPECT_NO_THROW(config_from(hdfs + "[enhance]\nchain = tokenize, aggregate\n"));
}

TEST(PipelineConfig, RejectsUnknownOrMalformedEntries) {
  const std::string base = "[loader]\nformat = hdfs\nlog = x.log\n[enhance]\nchain = tokenize, aggregate\n";
  EXPECT_THROW(config_from(base + "[typo]\na = b\n"), ConfigError);
  EXPECT_THROW(config_from(base + "[detector]\nkinf = dt\n"), ConfigError);
  EXPECT_THROW(config_from(base + "[detector]\nkind = svm\n"), ConfigError);
  EXPECT_THROW(config_from(base + "[split]\ntrain_fraction = 1.5\n"), ConfigError);
  EXPECT_THROW(config_from(base + "[split]\nseed = abc\n"), ConfigError);
  EXPECT_THROW(config_from(base + "[features]\nbinary = maybe\n"), ConfigError);
  EXPECT_THROW(config_from("[loader]\nformat = weird\nlog = x\n"), ConfigError);
  EXPECT_THROW(config_from("[enhance]\nchain = tokenize\n"), ConfigError);  // no loader
}

// --- run -------------------------------------------------------------------

TEST(Pipeline, TwoThousandLineFixtureWithDrainAndTree) {
  testutil::TempDir dir("pipe_2k");
  PipelineConfig c = read_pipeline_config(data("hdfs_2k.ini"));
  c.output_dir = dir / "out";
  const auto r = run_pipeline(c);
  ASSERT_TRUE(r.model);
  EXPECT_EQ(r.data.events.num_rows(), 2000u);
  EXPECT_EQ(r.report.total(), r.data.sequences->num_rows() - 94u);  // llround(0.5 * 187) = 94 sequences train
  EXPECT_GT(r.report.f1_binary, 0.0);
  for (const char* f : {"report.json", "report.csv", "model.json", "templates.json", "events.lltable", "sequences.lltable"})
    EXPECT_TRUE(std::filesystem::exists(c.output_dir / f)) << f;
  const auto j = read_json(c.output_dir / "report.json");
  for (const char* key : {"tp", "fp", "fn", "tn", "accuracy", "precision", "recall", "f1_binary", "auc_roc"}) {
    ASSERT_TRUE(j.contains(key)) << key;
    EXPECT_FALSE(j.at(key).is_null()) << key;
  }
  for (const char* phase : {"load", "enhance:normalize", "enhance:drain", "split", "vectorize", "train", "evaluate"})
    EXPECT_TRUE(j.at("wall_clock_ms").contains(phase)) << phase;

  // Report numbers agree with an independent recomputation from the saved model inputs.
  const auto events = read_table_file(c.output_dir / "events.lltable");
  EXPECT_EQ(serialize_table(events), serialize_table(r.data.events));
  const auto store = TemplateStore::from_json(read_json(c.output_dir / "templates.json"));
  const auto& ids = events.get<Int64Column>(col::event_id);
  const auto& norm = events.get<TextColumn>(col::normalized);
  for (std::size_t i = 0; i < ids.size(); ++i) EXPECT_TRUE(store.matches(ids[i], split_words(norm[i])));
}

TEST(Pipeline, SameConfigSameOutputsExceptTimings) {
  testutil::TempDir dir("pipe_det");
  PipelineConfig c = read_pipeline_config(data("hdfs_2k.ini"));
  c.detector = DetectorKind::lr;
  c.output_dir = dir / "a";
  const auto a = run_pipeline(c);
  c.output_dir = dir / "b";
  const auto b = run_pipeline(c);
  EXPECT_EQ(a.report.to_json(false), b.report.to_json(false));
  for (const char* f : {"model.json", "templates.json", "events.lltable", "sequences.lltable", "report.csv"})
    EXPECT_EQ(testutil::read_file(dir / "a" / f), testutil::read_file(dir / "b" / f)) << f;
}

TEST(Pipeline, EventLevelWithNgramOnBgl) {
  testutil::TempDir dir("pipe_bgl");
  SyntheticSpec spec;
  spec.lines = 1500;
  spec.anomaly_rate = 0.05;
  spec.seed = 6;
  const auto files = write_corpus(generate_corpus(spec), dir.path());
  PipelineConfig c = config_from("[loader]\nformat = bgl\nlog = " + files.log.string() +
                                 "\n[enhance]\nchain = normalize, tokenize, drain, ngram\n"
                                 "[features]\nlevel = event\nsource = words\n[detector]\nkind = oov\n");
  c.output_dir = dir / "out";
  const auto r = run_pipeline(c);
  EXPECT_TRUE(r.data.events.has_column("e_ngram_rare"));
  EXPECT_TRUE(std::filesystem::exists(c.output_dir / "ngram.json"));
  EXPECT_EQ(r.report.total(), 750u);
  EXPECT_TRUE(r.report.auc_roc.has_value());
}

TEST(Pipeline, EmptyRawInputWarnsAndSucceeds) {
  testutil::TempDir dir("pipe_empty");
  PipelineConfig c = config_from("[loader]\nformat = raw\nlog = " + data("empty.log").string() +
                                 "\n[enhance]\nchain = normalize, tokenize\n[features]\nlevel = event\n"
                                 "[detector]\nkind = oov\n");
  c.output_dir = dir / "out";
  const auto r = run_pipeline(c);
  EXPECT_EQ(r.data.events.num_rows(), 0u);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_EQ(read_table_file(c.output_dir / "events.lltable").num_rows(), 0u);
}

TEST(Pipeline, MissingInputIsIoError) {
  PipelineConfig c = config_from("[loader]\nformat = raw\nlog = /nonexistent/x.log\n[enhance]\nchain = tokenize\n"
                                 "[features]\nlevel = event\n");
  EXPECT_THROW(run_pipeline(c), IoError);
}

TEST(Pipeline, TrainingFailureIsTaggedWithStage) {
  testutil::TempDir dir("pipe_stage");
  testutil::write_file(dir / "a.log",
                       "081109 203615 148 INFO dfs.DataNode: got blk_1\n081109 203615 148 INFO dfs.DataNode: got blk_2\n"
                       "081109 203615 148 INFO dfs.DataNode: got blk_3\n081109 203615 148 INFO dfs.DataNode: got blk_4\n");
  testutil::write_file(dir / "l.csv", "BlockId,Label\nblk_1,Normal\nblk_2,Normal\nblk_3,Normal\nblk_4,Normal\n");
  PipelineConfig c = config_from("[loader]\nformat = hdfs\nlog = a.log\nlabels = l.csv\n"
                                 "[enhance]\nchain = tokenize, aggregate\n[detector]\nkind = lr\n",
                                 dir.path());
  c.output_dir = dir / "out";
  try {
    run_pipeline(c);
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "train");
    EXPECT_NE(std::string(e.what()).find("[train]"), std::string::npos);
  }
}

// --- CLI -------------------------------------------------------------------

TEST(Cli, DetectOnFixtureExitsZero) {
  testutil::TempDir dir("cli_detect");
  const auto r = run_cli("detect --config " + quoted(data("hdfs_2k.ini")) + " --out " + quoted(dir / "out"), dir);
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("f1_binary"));
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "report.json"));
}

TEST(Cli, ExitCodes) {
  testutil::TempDir dir("cli_codes");
  // configuration error
  testutil::write_file(dir / "bad.ini", "[loader]\nformat = raw\nlog = x.log\n[enhance]\nchain = tokenize, ngram\n"
                                        "[features]\nlevel = event\n");
  auto r = run_cli("detect --config " + quoted(dir / "bad.ini"), dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("config error"), std::string::npos);
  // unknown flag
  EXPECT_EQ(run_cli("load --format raw --bogus x", dir).code, 1);
  // missing input file
  r = run_cli("load --format raw " + quoted(dir / "nope.log") + " --out " + quoted(dir / "o"), dir);
  EXPECT_EQ(r.code, 2);
  // stage failure
  testutil::write_file(dir / "a.log", "081109 203615 148 INFO dfs.DataNode: got blk_1\n"
                                      "081109 203615 148 INFO dfs.DataNode: got blk_2\n");
  testutil::write_file(dir / "l.csv", "BlockId,Label\nblk_1,Normal\nblk_2,Normal\n");
  testutil::write_file(dir / "lr.ini", "[loader]\nformat = hdfs\nlog = a.log\nlabels = l.csv\n"
                                       "[enhance]\nchain = tokenize, aggregate\n[detector]\nkind = lr\n");
  r = run_cli("detect --config " + quoted(dir / "lr.ini") + " --out " + quoted(dir / "o2"), dir);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("[train]"), std::string::npos) << r.err;
}

TEST(Cli, EmptyRawInput) {
  testutil::TempDir dir("cli_empty");
  testutil::write_file(dir / "e.ini", "[loader]\nformat = raw\nlog = " + data("empty.log").string() +
                                          "\n[enhance]\nchain = normalize, tokenize\n[features]\nlevel = event\n"
                                          "[detector]\nkind = oov\n");
  const auto r = run_cli("detect --config " + quoted(dir / "e.ini") + " --out " + quoted(dir / "out"), dir);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Cli, LoadSynthAndBench) {
  testutil::TempDir dir("cli_misc");
  auto r = run_cli("synth --format hdfs-like --lines 600 --anomaly-rate 0.1 --seed 3 --out " + quoted(dir / "s"), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  r = run_cli("load --format hdfs " + quoted(dir / "s" / "synthetic_hdfs.log") + " --labels " +
                  quoted(dir / "s" / "anomaly_label.csv") + " --out " + quoted(dir / "t") + " --csv",
              dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out).at("events").at("rows"), 600);
  EXPECT_TRUE(std::filesystem::exists(dir / "t" / "sequences.csv"));
  r = run_cli("bench loading --format hdfs --repeats 2 " + quoted(dir / "s" / "synthetic_hdfs.log") + " " +
                  quoted(dir / "missing.log") + " --out " + quoted(dir / "b"),
              dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("notice"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "b" / "table1_loading.csv"));
  r = run_cli("bench parsers --format hdfs --mode both --repeats 1 " + quoted(dir / "s" / "synthetic_hdfs.log") +
                  " --out " + quoted(dir / "b"),
              dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "b" / "table2_masking.csv"));
}
