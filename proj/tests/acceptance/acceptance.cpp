// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "loglead/loglead.hpp"

using namespace loglead;
namespace fs = std::filesystem;

namespace {

// Tolerances and sizes, pinned here.
constexpr int kParseCorpora = 200;
constexpr std::size_t kParseMaxLines = 1000;
constexpr double kParseDrainAccuracy = 1.0;
constexpr double kParseOtherAccuracy = 0.95;
constexpr double kParseBudgetSeconds = 60.0;
constexpr int kOracleTrials = 100;
constexpr std::size_t kOracleMaxEvents = 1000;
constexpr double kF1HandTolerance = 1e-15;
constexpr int kDetectorSeeds = 10;
constexpr double kSupervisedMinF1 = 0.95;
constexpr std::size_t kMaskingLines = 50000;
constexpr int kMaskingRepeats = 3;
constexpr double kMinLinesPerSecond = 100000.0;
constexpr std::size_t kScaleSmall = 1000000, kScaleLarge = 4000000;
constexpr double kScaleRatioLo = 3.0, kScaleRatioHi = 5.0;
constexpr double kLoaderBudgetSeconds = 120.0;
constexpr int kLoaderRepeats = 3;  // medians of repeated loads
constexpr double kGradientRelTolerance = 1e-5;
constexpr double kFiniteDifferenceStep = 1e-6;
constexpr int kNumericSeeds = 50;
constexpr double kAucTolerance = 1e-12;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = fs::temp_directory_path() / ("loglead_acc_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  fs::path operator/(const std::string& n) const { return path_ / n; }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Fraction of messages whose predicted group is exactly their true group.
double grouping_accuracy(const std::vector<std::int64_t>& pred, const std::vector<std::size_t>& truth) {
  std::map<std::int64_t, std::size_t> pred_size;
  std::map<std::size_t, std::size_t> truth_size;
  std::map<std::pair<std::int64_t, std::size_t>, std::size_t> both;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++pred_size[pred[i]];
    ++truth_size[truth[i]];
    ++both[{pred[i], truth[i]}];
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const std::size_t b = both[{pred[i], truth[i]}];
    if (b == pred_size[pred[i]] && b == truth_size[truth[i]]) ++correct;
  }
  return pred.empty() ? 1.0 : static_cast<double>(correct) / static_cast<double>(pred.size());
}

std::vector<std::int64_t> id_vector(const Int64Column& c) {
  std::vector<std::int64_t> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i];
  return out;
}

// --- 1: parsing --------------------------------------------------------------

Outcome criterion_parsing() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  int drain_exact = 0;
  double drain_min = 1.0, spell_min = 1.0, lenma_min = 1.0, spell_sum = 0, lenma_sum = 0;
  for (int k = 0; k < kParseCorpora; ++k) {
    SyntheticSpec spec;
    spec.templates = 3 + rng() % 8;
    spec.lines = spec.templates + rng() % (kParseMaxLines - spec.templates + 1);
    spec.seed = rng();
    const auto corpus = generate_corpus(spec);
    TextColumn messages;
    std::vector<std::size_t> truth;
    for (const auto& e : corpus.events) {
      messages.push_back(e.message);
      truth.push_back(e.template_id);
    }
    DrainConfig dc;
    dc.depth = 4;
    dc.sim_threshold = 0.5;
    const auto d = drain_parse(messages, dc);
    const double dacc = grouping_accuracy(id_vector(d.event_ids), truth);
    if (d.store.size() == corpus.distinct_templates() && dacc >= kParseDrainAccuracy) ++drain_exact;
    drain_min = std::min(drain_min, dacc);
    const double sacc = grouping_accuracy(id_vector(spell_parse(messages).event_ids), truth);
    const double lacc = grouping_accuracy(id_vector(lenma_parse(messages).event_ids), truth);
    spell_min = std::min(spell_min, sacc);
    lenma_min = std::min(lenma_min, lacc);
    spell_sum += sacc;
    lenma_sum += lacc;
  }
  const double secs = since(start);
  Outcome o;
  o.pass = drain_exact == kParseCorpora && spell_min >= kParseOtherAccuracy && lenma_min >= kParseOtherAccuracy &&
           secs < kParseBudgetSeconds;
  o.detail = "drain exact " + std::to_string(drain_exact) + "/" + std::to_string(kParseCorpora) + " (min GA " +
             fmt(drain_min) + "), spell min GA " + fmt(spell_min) + " mean " + fmt(spell_sum / kParseCorpora) +
             ", lenma min GA " + fmt(lenma_min) + " mean " + fmt(lenma_sum / kParseCorpora) + ", " + fmt(secs) + " s";
  return o;
}

// --- 2: aggregation and n-gram -------------------------------------------------

Outcome criterion_aggregate_ngram() {
  std::mt19937_64 rng(777);
  int agg_ok = 0, ngram_ok = 0;
  for (int trial = 0; trial < kOracleTrials; ++trial) {
    const std::size_t n = 1 + rng() % kOracleMaxEvents;
    const std::size_t keys = 1 + rng() % 60;
    TextColumn ids;
    TimestampColumn ts;
    Int64Column eid;
    TextListColumn words;
    BoolColumn label;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 25 == 0) {
        ids.push_null();
      } else {
        ids.push_back("blk_" + std::to_string(rng() % keys));
      }
      ts.push_back(Timestamp{static_cast<std::int64_t>(rng() % 10'000'000'000ULL)});
      eid.push_back(static_cast<std::int64_t>(rng() % 12));
      std::vector<std::string> w;
      for (std::size_t j = 0, m = rng() % 4; j < m; ++j) w.push_back("w" + std::to_string(rng() % 9));
      words.push_back(w);
      label.push_back(rng() % 30 == 0);
    }
    const Table ev = Table::from_columns({{std::string(col::seq_id), ids},
                                          {std::string(col::timestamp), ts},
                                          {std::string(col::event_id), eid},
                                          {std::string(col::words), words},
                                          {std::string(col::label), label}});
    const auto s = aggregate_sequences(ev);

    // Oracle: one linear scan per key, keys in first-appearance order.
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i)
      if (!ids.is_null(i) && seen.insert(std::string(ids[i])).second) order.emplace_back(ids[i]);
    bool ok = s.num_rows() == order.size();
    for (std::size_t g = 0; ok && g < order.size(); ++g) {
      std::int64_t len = 0, lo = INT64_MAX, hi = INT64_MIN;
      bool anomaly = false;
      std::vector<std::int64_t> evs;
      std::vector<std::string> ws;
      for (std::size_t i = 0; i < n; ++i) {
        if (ids.is_null(i) || ids[i] != order[g]) continue;
        ++len;
        lo = std::min(lo, ts[i].micros);
        hi = std::max(hi, ts[i].micros);
        anomaly = anomaly || label[i];
        evs.push_back(eid[i]);
        for (auto w : words[i]) ws.emplace_back(w);
      }
      const auto got_e = s.get<IntListColumn>(col::event_ids)[g];
      const auto got_w = s.get<TextListColumn>(col::seq_words)[g];
      std::vector<std::string> gw;
      for (auto w : got_w) gw.emplace_back(w);
      ok = s.get<TextColumn>(col::seq_id)[g] == order[g] && s.get<Int64Column>(col::seq_len)[g] == len &&
           s.get<Int64Column>(col::duration)[g] == hi - lo && s.get<BoolColumn>(col::label)[g] == anomaly &&
           std::vector<std::int64_t>(got_e.begin(), got_e.end()) == evs && gw == ws;
    }
    agg_ok += ok ? 1 : 0;

    // n-gram over the aggregated sequences against a sliding-window count.
    std::vector<std::vector<std::int64_t>> seqs;
    for (std::size_t g = 0; g < s.num_rows(); ++g) {
      const auto e = s.get<IntListColumn>(col::event_ids)[g];
      seqs.emplace_back(e.begin(), e.end());
    }
    const int order_n = 2 + static_cast<int>(rng() % 3);
    const auto model = ngram_train(seqs, order_n);
    std::map<std::vector<std::int64_t>, std::map<std::int64_t, std::uint64_t>> counts;
    std::map<std::vector<std::int64_t>, std::uint64_t> totals;
    std::set<std::int64_t> vocab;
    for (const auto& sq : seqs) {
      std::vector<std::int64_t> padded(static_cast<std::size_t>(order_n - 1), kStartSentinel);
      padded.insert(padded.end(), sq.begin(), sq.end());
      for (std::size_t i = static_cast<std::size_t>(order_n - 1); i < padded.size(); ++i) {
        const std::vector<std::int64_t> ctx(padded.begin() + static_cast<std::ptrdiff_t>(i - (order_n - 1)),
                                            padded.begin() + static_cast<std::ptrdiff_t>(i));
        ++counts[ctx][padded[i]];
        ++totals[ctx];
        vocab.insert(padded[i]);
      }
    }
    bool nok = model.counts == counts && model.context_totals == totals && model.vocabulary == vocab;
    for (const auto& [ctx, nexts] : counts)
      for (const auto& [next, c] : nexts)
        nok = nok && model.probability(ctx, next) == static_cast<double>(c) / static_cast<double>(totals[ctx]);
    ngram_ok += nok ? 1 : 0;
  }
  Outcome o;
  o.pass = agg_ok == kOracleTrials && ngram_ok == kOracleTrials;
  o.detail = "aggregate " + std::to_string(agg_ok) + "/" + std::to_string(kOracleTrials) + ", ngram " +
             std::to_string(ngram_ok) + "/" + std::to_string(kOracleTrials);
  return o;
}

// --- 3: metrics ------------------------------------------------------------------

Outcome criterion_metrics() {
  std::mt19937_64 rng(31337);
  int ok = 0;
  for (int trial = 0; trial < kOracleTrials; ++trial) {
    const std::size_t n = 1 + rng() % 500;
    Labels p(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = rng() % 2;
      t[i] = rng() % 3 == 0;
    }
    const auto r = evaluate(p, t);
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] && t[i]) ++tp;
      if (p[i] && !t[i]) ++fp;
      if (!p[i] && t[i]) ++fn;
      if (!p[i] && !t[i]) ++tn;
    }
    const double prec = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    const double rec = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    const double f1 = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
    const bool same = r.tp == tp && r.fp == fp && r.fn == fn && r.tn == tn &&
                      std::abs(r.f1_binary - f1) <= 1e-12 &&
                      r.accuracy == static_cast<double>(tp + tn) / static_cast<double>(n);
    ok += same ? 1 : 0;
  }
  Labels pred, truth;
  auto add = [&](int k, std::uint8_t a, std::uint8_t b) {
    for (int i = 0; i < k; ++i) {
      pred.push_back(a);
      truth.push_back(b);
    }
  };
  add(9, 1, 1);
  add(1, 1, 0);
  add(1, 0, 1);
  add(989, 0, 0);
  const double hand = evaluate(pred, truth).f1_binary;
  Outcome o;
  o.pass = ok == kOracleTrials && std::abs(hand - 0.9) <= kF1HandTolerance;
  o.detail = "oracle " + std::to_string(ok) + "/" + std::to_string(kOracleTrials) + ", hand f1 - 0.9 = " +
             fmt(hand - 0.9);
  return o;
}

// --- 4: detectors -----------------------------------------------------------------

PipelineConfig hdfs_config(const SyntheticFiles& files, DetectorKind kind, std::uint64_t seed, const fs::path& out) {
  std::ostringstream ini;
  ini << "[loader]\nformat = hdfs\nlog = " << files.log.string() << "\nlabels = " << files.labels->string()
      << "\n[enhance]\nchain = normalize, tokenize, aggregate\nmasking_rules = "
      << (fs::path(LOGLEAD_TEST_DATA) / "hdfs_masking_rules.tsv").string()
      << "\n[features]\nlevel = sequence\nsource = words\n[detector]\nkind = " << to_string(kind)
      << "\n[split]\ntrain_fraction = 0.5\nseed = " << seed << "\n[output]\ndir = " << out.string() << "\n";
  std::istringstream in(ini.str());
  return parse_pipeline_config(in);
}

Outcome criterion_detectors() {
  TempDir dir("detectors");
  double oov_min = 1.0, lr_min = 1.0, dt_min = 1.0;
  for (int s = 0; s < kDetectorSeeds; ++s) {
    SyntheticSpec spec;
    spec.format = SyntheticFormat::hdfs_like;
    spec.templates = 8;
    spec.lines = 6000;
    spec.anomaly_rate = 0.1;
    spec.seed = 1000 + static_cast<std::uint64_t>(s);
    const auto files = write_corpus(generate_corpus(spec), dir / ("c" + std::to_string(s)));
    const auto seed = static_cast<std::uint64_t>(s);
    oov_min = std::min(oov_min, run_pipeline(hdfs_config(files, DetectorKind::oov, seed, dir / "o")).report.f1_binary);
    lr_min = std::min(lr_min, run_pipeline(hdfs_config(files, DetectorKind::lr, seed, dir / "o")).report.f1_binary);
    dt_min = std::min(dt_min, run_pipeline(hdfs_config(files, DetectorKind::dt, seed, dir / "o")).report.f1_binary);
  }
  Outcome o;
  o.pass = oov_min == 1.0 && lr_min >= kSupervisedMinF1 && dt_min >= kSupervisedMinF1;
  o.detail = "min f1 over " + std::to_string(kDetectorSeeds) + " seeds: oov " + fmt(oov_min) + ", lr " + fmt(lr_min) +
             ", dt " + fmt(dt_min);
  return o;
}

// --- 5: masking offload --------------------------------------------------------------

Outcome criterion_masking() {
  SyntheticSpec spec;
  spec.templates = 20;
  spec.lines = kMaskingLines;
  spec.seed = 55;
  const auto corpus = generate_corpus(spec);
  TextColumn messages;
  for (const auto& e : corpus.events) messages.push_back(e.message);
  const std::vector<ParserKind> drain = {ParserKind::drain};
  auto r = bench_parsers("synthetic", messages, drain, MaskingMode::pipeline, default_masking_rules(), kMaskingRepeats);
  append(r, bench_parsers("synthetic", messages, drain, MaskingMode::parser_internal, default_masking_rules(),
                          kMaskingRepeats));
  const double pipe = r.find("synthetic", "drain/pipeline/total")->median();
  const double internal = r.find("synthetic", "drain/parser_internal/total")->median();
  Outcome o;
  o.pass = pipe < internal;
  o.detail = std::to_string(kMaskingLines) + " lines, median total pipeline " + fmt(pipe) + " s vs parser-internal " +
             fmt(internal) + " s (ratio " + fmt(internal / pipe) + ")";
  return o;
}

// --- 6: loader throughput -------------------------------------------------------------

Outcome criterion_loader() {
  TempDir dir("loader");
  SyntheticSpec spec;
  spec.templates = 20;
  spec.seed = 66;
  spec.lines = kScaleSmall;
  write_bgl_stream(spec, dir / "small.log");
  spec.lines = kScaleLarge;
  write_bgl_stream(spec, dir / "large.log");

  const auto start = Clock::now();
  const auto r = bench_loading({{"1M", {LogFormat::bgl, dir / "small.log", std::nullopt}},
                                {"4M", {LogFormat::bgl, dir / "large.log", std::nullopt}}},
                               kLoaderRepeats);
  const double secs = since(start);
  const auto* small = r.find("1M", "load");
  const auto* large = r.find("4M", "load");
  const std::size_t n_small = small ? small->line_count : 0, n_large = large ? large->line_count : 0;
  const double t_small = small ? small->median() : 1.0, t_large = large ? large->median() : 1.0;
  const double rate = static_cast<double>(n_small + n_large) / (t_small + t_large);
  const double ratio = t_large / t_small;
  Outcome o;
  o.pass = n_small == kScaleSmall && n_large == kScaleLarge && rate >= kMinLinesPerSecond && ratio >= kScaleRatioLo &&
           ratio <= kScaleRatioHi && secs < kLoaderBudgetSeconds;
  o.detail = fmt(rate) + " lines/s, t(4M)/t(1M) = " + fmt(ratio) + " (" + fmt(t_small) + " s, " + fmt(t_large) +
             " s medians of " + std::to_string(kLoaderRepeats) + "), load phase " + fmt(secs) + " s";
  return o;
}

// --- 7: determinism -------------------------------------------------------------------

std::string pipeline_fingerprint(const fs::path& out) {
  std::string all;
  for (const char* f : {"events.lltable", "sequences.lltable", "templates.json", "ngram.json", "model.json", "report.csv"})
    if (fs::exists(out / f)) all += std::string(f) + '\n' + read_file(out / f);
  auto report = nlohmann::json::parse(read_file(out / "report.json"));
  report.erase("wall_clock_ms");
  return all + report.dump();
}

Outcome criterion_determinism() {
  TempDir dir("determinism");
  SyntheticSpec spec;
  spec.format = SyntheticFormat::hdfs_like;
  spec.lines = 3000;
  spec.anomaly_rate = 0.1;
  spec.seed = 77;
  const auto files = write_corpus(generate_corpus(spec), dir / "corpus");
  std::vector<std::string> failures;
  int runs = 0;
  for (const char* parser : {"drain", "spell", "lenma"}) {
    for (const char* kind : {"dt", "lr", "kmeans", "iforest", "oov", "rarity"}) {
      std::string fingerprints[2];
      for (int rep = 0; rep < 2; ++rep) {
        const fs::path out = dir / (std::string(parser) + "_" + kind + "_" + std::to_string(rep));
        std::ostringstream ini;
        ini << "[loader]\nformat = hdfs\nlog = " << files.log.string() << "\nlabels = " << files.labels->string()
            << "\n[enhance]\nchain = normalize, tokenize, " << parser << ", ngram, aggregate\n"
            << "[features]\nsource = " << (std::string(kind) == "oov" || std::string(kind) == "rarity" ? "words" : "event_ids")
            << "\n[detector]\nkind = " << kind << "\n[split]\nseed = 5\n[output]\ndir = " << out.string() << "\n";
        std::istringstream in(ini.str());
        run_pipeline(parse_pipeline_config(in));
        fingerprints[rep] = pipeline_fingerprint(out);
      }
      ++runs;
      if (fingerprints[0] != fingerprints[1]) failures.push_back(std::string(parser) + "+" + kind);
    }
  }
  // Split alone, and the synthetic generator.
  const auto seqs = load_hdfs(files.log, files.labels).sequences;
  const auto a = split_train_test(*seqs, 0.3, 11), b = split_train_test(*seqs, 0.3, 11);
  if (serialize_table(a.train) != serialize_table(b.train) || serialize_table(a.test) != serialize_table(b.test))
    failures.push_back("split");
  const auto again = write_corpus(generate_corpus(spec), dir / "corpus2");
  if (read_file(files.log) != read_file(again.log)) failures.push_back("synthetic");

  Outcome o;
  o.pass = failures.empty();
  o.detail = std::to_string(runs) + " pipeline configurations run twice";
  for (const auto& f : failures) o.detail += ", differs: " + f;
  return o;
}

// --- 8: numerics ----------------------------------------------------------------------

Outcome criterion_numerics() {
  double worst_rel = 0.0;
  int monotone_ok = 0, auc_ok = 0;
  for (int seed = 0; seed < kNumericSeeds; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed) + 100);
    std::normal_distribution<double> g(0.0, 1.0);
    const std::size_t n = 40 + rng() % 60, d = 2 + rng() % 8;
    CsrMatrix<double> xd(d);
    FeatureMatrix xc(d);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::pair<std::uint32_t, double>> rd;
      std::vector<std::pair<std::uint32_t, std::uint32_t>> rc;
      for (std::size_t j = 0; j < d; ++j) {
        if (rng() % 3 == 0) continue;
        const auto c = static_cast<std::uint32_t>(rng() % 6);
        if (c) rc.emplace_back(static_cast<std::uint32_t>(j), c);
        rd.emplace_back(static_cast<std::uint32_t>(j), g(rng));
      }
      xd.push_row(std::move(rd));
      xc.push_row(std::move(rc));
      y[i] = rng() % 2;
    }
    y[0] = 0;
    y[1] = 1;

    const LogisticObjective obj(xd, y, 0.01);
    std::vector<double> w(d + 1), grad(d + 1);
    for (auto& v : w) v = g(rng);
    obj.gradient(w, grad);
    for (std::size_t j = 0; j <= d; ++j) {
      auto plus = w, minus = w;
      plus[j] += kFiniteDifferenceStep;
      minus[j] -= kFiniteDifferenceStep;
      const double fd = (obj.loss(plus) - obj.loss(minus)) / (2 * kFiniteDifferenceStep);
      const double rel = std::abs(grad[j] - fd) / std::max({1.0, std::abs(grad[j]), std::abs(fd)});
      worst_rel = std::max(worst_rel, rel);
    }

    const auto model = LogisticRegression::train(xc, y);
    bool mono = !model.loss_history.empty();
    for (std::size_t i = 1; i < model.loss_history.size(); ++i) mono = mono && model.loss_history[i] <= model.loss_history[i - 1];
    monotone_ok += mono ? 1 : 0;

    std::vector<double> s(n), t1(n), t2(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = std::round(g(rng) * 4) / 4 + (y[i] ? 0.7 : 0.0);  // with ties
      t1[i] = std::exp(s[i]);
      t2[i] = 3.0 * s[i] * s[i] * s[i] + 10.0;
    }
    const auto a0 = auc_roc(s, y), a1 = auc_roc(t1, y), a2 = auc_roc(t2, y);
    auc_ok += (a0 && a1 && a2 && std::abs(*a0 - *a1) <= kAucTolerance && std::abs(*a0 - *a2) <= kAucTolerance) ? 1 : 0;
  }
  Outcome o;
  o.pass = worst_rel <= kGradientRelTolerance && monotone_ok == kNumericSeeds && auc_ok == kNumericSeeds;
  o.detail = "worst gradient rel. error " + fmt(worst_rel) + ", monotone loss " + std::to_string(monotone_ok) + "/" +
             std::to_string(kNumericSeeds) + ", AUC invariant " + std::to_string(auc_ok) + "/" +
             std::to_string(kNumericSeeds);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 parsing oracle", criterion_parsing},
      {"2 aggregation and n-gram oracles", criterion_aggregate_ngram},
      {"3 metric correctness", criterion_metrics},
      {"4 detector sanity", criterion_detectors},
      {"5 masking offload direction", criterion_masking},
      {"6 loader throughput and scaling", criterion_loader},
      {"7 determinism", criterion_determinism},
      {"8 numerical checks", criterion_numerics},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << name << ": " << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
