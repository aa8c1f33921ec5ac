// loglead command-line entry point.
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error,
// 3 pipeline-stage failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "loglead/loglead.hpp"

namespace fs = std::filesystem;
using namespace loglead;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitStage = 3;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

LogFormat require_format(const std::string& s) {
  auto f = parse_log_format(s);
  if (!f) throw ConfigError("unknown --format '" + s + "'");
  return *f;
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_tables(const fs::path& out, const EventTable& events, const std::optional<SequenceTable>& sequences,
                  bool csv) {
  ensure_dir(out);
  write_table_file(out / "events.lltable", events);
  if (sequences) write_table_file(out / "sequences.lltable", *sequences);
  if (csv) {
    write_csv_file(out / "events.csv", events);
    if (sequences) write_csv_file(out / "sequences.csv", *sequences);
  }
}

nlohmann::json table_summary(const Table& t) {
  return {{"rows", t.num_rows()}, {"columns", t.column_names()}};
}

struct LoadArgs {
  std::string format;
  std::string input;
  std::string labels;
  std::string out = "out";
  bool csv = false;
};

int cmd_load(const LoadArgs& a) {
  LoaderSpec spec{require_format(a.format), a.input, std::nullopt};
  if (!a.labels.empty()) spec.label_path = fs::path(a.labels);
  check_loader_spec(spec);
  if (!fs::exists(spec.log_path)) throw IoError("input not found: " + a.input);
  LoadResult r = load(spec);
  print_warnings(r.diagnostics.warnings);
  write_tables(a.out, r.events, r.sequences, a.csv);
  nlohmann::json summary = {{"events", table_summary(r.events)},
                            {"lines_read", r.diagnostics.lines_read},
                            {"merged_lines", r.diagnostics.merged_lines},
                            {"dropped_lines", r.diagnostics.dropped_lines},
                            {"replaced_bytes", r.diagnostics.replaced_bytes}};
  if (r.sequences) summary["sequences"] = table_summary(*r.sequences);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

struct PipelineArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

PipelineConfig resolve_config(const PipelineArgs& a) {
  PipelineConfig c = read_pipeline_config(a.config);
  if (a.seed) c.seed = *a.seed;
  if (!a.out.empty()) c.output_dir = a.out;
  return c;
}

int cmd_enhance(const PipelineArgs& a) {
  const PipelineConfig c = resolve_config(a);
  PhaseTimings timings;
  EnhancedData d = load_and_enhance(c, timings);
  print_warnings(d.warnings);
  write_tables(c.output_dir, d.events, d.sequences, c.write_csv_tables);
  if (d.templates) d.templates->save(c.output_dir / "templates.json");
  if (d.ngram) write_json_file(c.output_dir / "ngram.json", d.ngram->to_json());
  nlohmann::json summary = {{"events", table_summary(d.events)}, {"wall_clock_ms", timings}};
  if (d.sequences) summary["sequences"] = table_summary(*d.sequences);
  if (d.templates) summary["templates"] = d.templates->size();
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_detect(const PipelineArgs& a) {
  const PipelineConfig c = resolve_config(a);
  const PipelineResult r = run_pipeline(c);
  print_warnings(r.warnings);
  std::cout << r.report.to_json().dump(2) << '\n';
  return 0;
}

struct BenchLoadingArgs {
  std::string format = "bgl";
  std::vector<std::string> inputs;
  std::string labels;
  int repeats = 3;
  std::string out = "out";
};

int cmd_bench_loading(const BenchLoadingArgs& a) {
  const LogFormat format = require_format(a.format);
  std::vector<NamedLoaderSpec> datasets;
  for (const auto& in : a.inputs) {
    LoaderSpec spec{format, in, std::nullopt};
    if (!a.labels.empty()) spec.label_path = fs::path(a.labels);
    check_loader_spec(spec);
    datasets.push_back({fs::path(in).filename().string(), spec});
  }
  const BenchReport report = bench_loading(datasets, a.repeats);
  for (const auto& n : report.notices) std::cerr << "notice: " << n << '\n';
  ensure_dir(a.out);
  report.write_csv_file(fs::path(a.out) / "table1_loading.csv");
  write_json_file(fs::path(a.out) / "bench_loading.json", report.to_json());
  report.write_csv(std::cout);
  return 0;
}

struct BenchParsersArgs {
  std::string format = "raw";
  std::string input;
  std::string labels;
  std::string parsers = "drain,spell,lenma";
  std::string mode = "pipeline";
  std::string masking_rules;
  std::size_t limit = 0;
  int repeats = 3;
  std::string out = "out";
};

int cmd_bench_parsers(const BenchParsersArgs& a) {
  std::vector<ParserKind> parsers;
  for (const auto& p : detail::split_list(a.parsers)) parsers.push_back(parse_parser_kind(p));
  std::vector<MaskingMode> modes;
  if (a.mode == "both") {
    modes = {MaskingMode::pipeline, MaskingMode::parser_internal};
  } else {
    modes = {parse_masking_mode(a.mode)};
  }
  const MaskingRules rules = a.masking_rules.empty() ? default_masking_rules() : read_masking_rules(a.masking_rules);

  LoaderSpec spec{require_format(a.format), a.input, std::nullopt};
  if (!a.labels.empty()) spec.label_path = fs::path(a.labels);
  check_loader_spec(spec);
  if (!fs::exists(spec.log_path)) throw IoError("input not found: " + a.input);
  const LoadResult loaded = load(spec);
  TextColumn messages = loaded.events.get<TextColumn>(col::message);
  if (a.limit != 0 && a.limit < messages.size()) {
    std::vector<std::size_t> rows(a.limit);
    for (std::size_t i = 0; i < a.limit; ++i) rows[i] = i;
    messages = std::get<TextColumn>(take(Column(messages), rows));
  }

  BenchReport report;
  const std::string dataset = fs::path(a.input).filename().string();
  for (MaskingMode m : modes) append(report, bench_parsers(dataset, messages, parsers, m, rules, a.repeats));
  ensure_dir(a.out);
  const char* csv_name = modes.size() > 1 ? "table2_masking.csv" : "table3_parsers.csv";
  report.write_csv_file(fs::path(a.out) / csv_name);
  write_json_file(fs::path(a.out) / "bench_parsers.json", report.to_json());
  report.write_csv(std::cout);
  return 0;
}

struct SynthArgs {
  std::string format = "bgl";
  std::size_t templates = 5;
  std::size_t lines = 1000;
  double anomaly_rate = 0.0;
  std::uint64_t seed = 0;
  std::string out = "out";
  bool stream = false;
};

int cmd_synth(const SynthArgs& a) {
  SyntheticSpec spec{parse_synthetic_format(a.format), a.templates, a.lines, a.anomaly_rate, a.seed};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (a.stream) {
    if (spec.format != SyntheticFormat::bgl) throw ConfigError("--stream supports only the bgl format");
    ensure_dir(a.out);
    const fs::path path = fs::path(a.out) / "synthetic_bgl.log";
    write_bgl_stream(spec, path);
    std::cout << path.string() << '\n';
    return 0;
  }
  const SyntheticCorpus corpus = generate_corpus(spec);
  const SyntheticFiles files = write_corpus(corpus, a.out);
  std::cout << files.log.string() << '\n' << files.ground_truth.string() << '\n';
  if (files.labels) std::cout << files.labels->string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Log loading, enhancement and anomaly detection"};
  app.require_subcommand(1);

  LoadArgs load_args;
  auto* load_cmd = app.add_subcommand("load", "Load a log file into tables");
  load_cmd->add_option("--format", load_args.format, "hdfs, bgl, thunderbird, spirit, liberty, hadoop or raw")
      ->required();
  load_cmd->add_option("input", load_args.input, "Log file (or hadoop root directory)")->required();
  load_cmd->add_option("--labels", load_args.labels, "Label file (hdfs BlockId,Label CSV; hadoop application list)");
  load_cmd->add_option("--out", load_args.out, "Output directory");
  load_cmd->add_flag("--csv", load_args.csv, "Also write CSV tables");

  PipelineArgs enhance_args;
  auto* enhance_cmd = app.add_subcommand("enhance", "Load and run the configured enhancer chain");
  enhance_cmd->add_option("--config", enhance_args.config, "Pipeline config file")->required();
  enhance_cmd->add_option("--out", enhance_args.out, "Output directory (overrides output.dir)");

  PipelineArgs detect_args;
  auto* detect_cmd = app.add_subcommand("detect", "Run the full pipeline and evaluate a detector");
  detect_cmd->add_option("--config", detect_args.config, "Pipeline config file")->required();
  detect_cmd->add_option("--seed", detect_args.seed, "Split/detector seed (overrides split.seed)");
  detect_cmd->add_option("--out", detect_args.out, "Output directory (overrides output.dir)");

  auto* bench_cmd = app.add_subcommand("bench", "Benchmarks");
  bench_cmd->require_subcommand(1);
  BenchLoadingArgs bl;
  auto* bench_loading_cmd = bench_cmd->add_subcommand("loading", "Time file-to-table loading");
  bench_loading_cmd->add_option("--format", bl.format, "Log format");
  bench_loading_cmd->add_option("inputs", bl.inputs, "Log files")->required();
  bench_loading_cmd->add_option("--labels", bl.labels, "Label file passed to every dataset");
  bench_loading_cmd->add_option("--repeats", bl.repeats, "Repeats per dataset")->check(CLI::PositiveNumber);
  bench_loading_cmd->add_option("--out", bl.out, "Output directory");

  BenchParsersArgs bp;
  auto* bench_parsers_cmd = bench_cmd->add_subcommand("parsers", "Time template parsers");
  bench_parsers_cmd->add_option("--format", bp.format, "Log format of the input");
  bench_parsers_cmd->add_option("input", bp.input, "Log file")->required();
  bench_parsers_cmd->add_option("--labels", bp.labels, "Label file, if the format needs one");
  bench_parsers_cmd->add_option("--parsers", bp.parsers, "Comma list of drain, spell, lenma");
  bench_parsers_cmd->add_option("--mode", bp.mode, "pipeline, parser_internal or both");
  bench_parsers_cmd->add_option("--masking-rules", bp.masking_rules, "PATTERN<TAB><TOKEN> rules file");
  bench_parsers_cmd->add_option("--limit", bp.limit, "Use only the first N messages");
  bench_parsers_cmd->add_option("--repeats", bp.repeats, "Repeats per parser")->check(CLI::PositiveNumber);
  bench_parsers_cmd->add_option("--out", bp.out, "Output directory");

  SynthArgs sa;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
  synth_cmd->add_option("--format", sa.format, "bgl or hdfs-like");
  synth_cmd->add_option("--templates", sa.templates, "Number of normal templates");
  synth_cmd->add_option("--lines", sa.lines, "Number of lines");
  synth_cmd->add_option("--anomaly-rate", sa.anomaly_rate, "Anomaly probability per line (bgl) or block");
  synth_cmd->add_option("--seed", sa.seed, "Generator seed");
  synth_cmd->add_option("--out", sa.out, "Output directory");
  synth_cmd->add_flag("--stream", sa.stream, "Stream a large bgl file without ground truth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*load_cmd) return cmd_load(load_args);
    if (*enhance_cmd) return cmd_enhance(enhance_args);
    if (*detect_cmd) return cmd_detect(detect_args);
    if (*bench_loading_cmd) return cmd_bench_loading(bl);
    if (*bench_parsers_cmd) return cmd_bench_parsers(bp);
    if (*synth_cmd) return cmd_synth(sa);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const StageError& e) {
    std::cerr << "stage error: " << e.what() << '\n';
    return kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  }
  return 0;
}
