#include <gtest/gtest.h>

#include <map>
#include <set>

#include "test_util.hpp"

using namespace loglead;

namespace {

// Skeleton of a group of messages: the tokens every member shares at each
// position, "<*>" elsewhere. Groups come from the generator's ground truth.
std::map<std::size_t, std::vector<std::string>> skeletons(const SyntheticCorpus& c) {
  std::map<std::size_t, std::vector<std::string>> out;
  for (const auto& e : c.events) {
    std::vector<std::string> toks;
    for (auto t : split_words(e.message)) toks.emplace_back(t);
    auto [it, inserted] = out.try_emplace(e.template_id, toks);
    if (inserted) continue;
    auto& sk = it->second;
    EXPECT_EQ(sk.size(), toks.size()) << "template " << e.template_id << " changed length";
    for (std::size_t i = 0; i < sk.size() && i < toks.size(); ++i)
      if (sk[i] != toks[i]) sk[i] = "<*>";
  }
  return out;
}

}  // namespace

TEST(Synthetic, TemplatesRecoverableByExhaustiveGrouping) {
  SyntheticSpec spec;
  spec.templates = 5;
  spec.lines = 1000;
  spec.seed = 1;
  const auto c = generate_corpus(spec);
  ASSERT_EQ(c.events.size(), 1000u);
  EXPECT_EQ(c.distinct_templates(), 5u);
  const auto sk = skeletons(c);
  ASSERT_EQ(sk.size(), 5u);
  std::set<std::vector<std::string>> distinct;
  for (const auto& [id, s] : sk) distinct.insert(s);
  EXPECT_EQ(distinct.size(), 5u);
  // Every message fits exactly one skeleton, the one of its own template.
  for (const auto& e : c.events) {
    const auto toks = split_words(e.message);
    std::size_t fits = 0;
    for (const auto& [id, s] : sk) {
      if (matches_positionally(s, toks)) {
        ++fits;
        EXPECT_EQ(id, e.template_id);
      }
    }
    EXPECT_EQ(fits, 1u) << e.message;
  }
}

TEST(Synthetic, ZeroAnomalyRateMeansAllNormal) {
  for (auto fmt : {SyntheticFormat::bgl, SyntheticFormat::hdfs_like}) {
    SyntheticSpec spec;
    spec.format = fmt;
    spec.lines = 500;
    spec.seed = 3;
    const auto c = generate_corpus(spec);
    for (auto l : line_labels(c)) EXPECT_EQ(l, 0);
    for (const auto& [id, a] : c.blocks) EXPECT_FALSE(a);
  }
}

TEST(Synthetic, SameSeedByteIdenticalFiles) {
  testutil::TempDir a("synth_a"), b("synth_b");
  for (auto fmt : {SyntheticFormat::bgl, SyntheticFormat::hdfs_like}) {
    SyntheticSpec spec;
    spec.format = fmt;
    spec.lines = 800;
    spec.anomaly_rate = 0.1;
    spec.seed = 21;
    const auto fa = write_corpus(generate_corpus(spec), a.path());
    const auto fb = write_corpus(generate_corpus(spec), b.path());
    EXPECT_EQ(testutil::read_file(fa.log), testutil::read_file(fb.log));
    EXPECT_EQ(testutil::read_file(fa.ground_truth), testutil::read_file(fb.ground_truth));
    if (fa.labels) {
      EXPECT_EQ(testutil::read_file(*fa.labels), testutil::read_file(*fb.labels));
    }
  }
  SyntheticSpec spec;
  spec.lines = 2000;
  spec.seed = 4;
  write_bgl_stream(spec, a / "s.log");
  write_bgl_stream(spec, b / "s.log");
  EXPECT_EQ(testutil::read_file(a / "s.log"), testutil::read_file(b / "s.log"));
}

TEST(Synthetic, FilesLoadBackWithGroundTruth) {
  testutil::TempDir dir("synth_load");
  SyntheticSpec spec;
  spec.lines = 700;
  spec.anomaly_rate = 0.05;
  spec.seed = 8;
  const auto c = generate_corpus(spec);
  const auto f = write_corpus(c, dir.path());
  const auto bgl = load_supercomputer(f.log, SupercomputerFormat::bgl);
  ASSERT_EQ(bgl.events.num_rows(), 700u);
  const auto& msg = bgl.events.get<TextColumn>(col::message);
  const auto& lab = bgl.events.get<BoolColumn>(col::label);
  for (std::size_t i = 0; i < c.events.size(); ++i) {
    EXPECT_EQ(msg[i], c.events[i].message);
    EXPECT_EQ(lab[i], c.events[i].anomaly);
  }

  spec.format = SyntheticFormat::hdfs_like;
  const auto h = generate_corpus(spec);
  const auto hf = write_corpus(h, dir / "hdfs");
  const auto loaded = load_hdfs(hf.log, hf.labels);
  EXPECT_EQ(loaded.events.num_rows(), 700u);
  ASSERT_EQ(loaded.sequences->num_rows(), h.blocks.size());
  const auto& lbl = loaded.sequences->get<BoolColumn>(col::label);
  for (std::size_t i = 0; i < h.blocks.size(); ++i) EXPECT_EQ(lbl[i], h.blocks[i].second);
}

TEST(Synthetic, AnomaliesCarryNovelTokens) {
  SyntheticSpec spec;
  spec.lines = 2000;
  spec.anomaly_rate = 0.1;
  spec.seed = 5;
  const auto c = generate_corpus(spec);
  for (const auto& e : c.events) EXPECT_EQ(e.anomaly, e.message.find(" zq") != std::string::npos) << e.message;
}

TEST(Synthetic, BadSpecs) {
  SyntheticSpec spec;
  spec.templates = 0;
  EXPECT_THROW(generate_corpus(spec), std::invalid_argument);
  spec.templates = 3;
  spec.anomaly_rate = 1.0;
  EXPECT_THROW(generate_corpus(spec), std::invalid_argument);
}

TEST(Bench, MedianWithinMinMaxAndCsv) {
  testutil::TempDir dir("bench");
  SyntheticSpec spec;
  spec.lines = 20000;
  spec.seed = 1;
  write_bgl_stream(spec, dir / "bgl.log");
  std::vector<NamedLoaderSpec> sets = {{"bgl", {LogFormat::bgl, dir / "bgl.log", std::nullopt}},
                                       {"missing", {LogFormat::bgl, dir / "nope.log", std::nullopt}}};
  const auto r = bench_loading(sets, 3);
  ASSERT_EQ(r.rows.size(), 1u);
  ASSERT_EQ(r.notices.size(), 1u);
  EXPECT_NE(r.notices[0].find("missing"), std::string::npos);
  const auto& row = r.rows[0];
  EXPECT_EQ(row.line_count, 20000u);
  EXPECT_EQ(row.repeats(), 3u);
  EXPECT_GE(row.median(), row.min());
  EXPECT_LE(row.median(), row.max());
  std::ostringstream os;
  r.write_csv(os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "dataset,lines,phase,repeats,median_s,min_s,max_s,lines_per_s");
}

TEST(Bench, DoublingInputRoughlyDoublesLoadTime) {
  testutil::TempDir dir("bench_scale");
  SyntheticSpec spec;
  spec.seed = 2;
  spec.lines = 250000;
  write_bgl_stream(spec, dir / "small.log");
  spec.lines = 500000;
  write_bgl_stream(spec, dir / "large.log");
  const auto r = bench_loading({{"small", {LogFormat::bgl, dir / "small.log", std::nullopt}},
                                {"large", {LogFormat::bgl, dir / "large.log", std::nullopt}}},
                               5);
  ASSERT_EQ(r.rows.size(), 2u);
  // Fastest repeat of each size; the minimum is the least noisy estimate on a shared machine.
  const double ratio = r.rows[1].min() / r.rows[0].min();
  EXPECT_GE(ratio, 1.5);
  EXPECT_LE(ratio, 3.0);
}

TEST(Bench, ParserRowsForBothModes) {
  SyntheticSpec spec;
  spec.lines = 500;
  spec.seed = 9;
  const auto c = generate_corpus(spec);
  std::vector<std::string> msgs;
  for (const auto& e : c.events) msgs.push_back(e.message);
  const TextColumn col = testutil::texts(msgs);
  const std::vector<ParserKind> parsers = {ParserKind::drain, ParserKind::spell, ParserKind::lenma};
  auto r = bench_parsers("syn", col, parsers, MaskingMode::pipeline, default_masking_rules(), 2);
  append(r, bench_parsers("syn", col, parsers, MaskingMode::parser_internal, default_masking_rules(), 2));
  for (const char* p : {"drain", "spell", "lenma"}) {
    const std::string k(p);
    for (const std::string& phase : {k + "/pipeline/mask", k + "/pipeline/parse", k + "/pipeline/total",
                                    k + "/parser_internal/total"}) {
      const auto* row = r.find("syn", phase);
      ASSERT_NE(row, nullptr) << phase;
      EXPECT_EQ(row->repeats(), 2u);
      EXPECT_EQ(row->line_count, 500u);
    }
    const auto* total = r.find("syn", k + "/pipeline/total");
    const auto* mask = r.find("syn", k + "/pipeline/mask");
    const auto* parse = r.find("syn", k + "/pipeline/parse");
    for (std::size_t i = 0; i < 2; ++i)
      EXPECT_DOUBLE_EQ(total->seconds[i], mask->seconds[i] + parse->seconds[i]);
  }
  EXPECT_THROW(parse_masking_mode("sometimes"), ConfigError);
  EXPECT_THROW(time_repeats(0, [] {}), std::invalid_argument);
}
