#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "loglead/core/error.hpp"
#include "loglead/core/random.hpp"
#include "loglead/core/timestamp.hpp"
#include "loglead/detectors/eval.hpp"

namespace loglead {

enum class SyntheticFormat { bgl, hdfs_like };

inline std::string_view to_string(SyntheticFormat f) { return f == SyntheticFormat::bgl ? "bgl" : "hdfs-like"; }

inline SyntheticFormat parse_synthetic_format(std::string_view s) {
  if (s == "bgl") return SyntheticFormat::bgl;
  if (s == "hdfs-like" || s == "hdfs") return SyntheticFormat::hdfs_like;
  throw ConfigError("unknown synthetic format '" + std::string(s) + "' (expected bgl or hdfs-like)");
}

struct SyntheticSpec {
  SyntheticFormat format = SyntheticFormat::bgl;
  std::size_t templates = 5;
  std::size_t lines = 1000;
  double anomaly_rate = 0.0;  // per line (bgl) or per block (hdfs-like)
  std::uint64_t seed = 0;

  void validate() const {
    if (templates < 1) throw std::invalid_argument("synthetic: templates must be >= 1");
    if (!(anomaly_rate >= 0.0 && anomaly_rate < 1.0)) throw std::invalid_argument("synthetic: anomaly_rate must be in [0,1)");
  }
};

/// A message skeleton. Every template has a unique first word, and its
/// constant words come from a vocabulary no other template uses. Constants
/// outnumber parameters. Each parameter is exactly one token: numbers may
/// appear from position 1, alphanumeric values and block ids from position 2.
struct SyntheticTemplate {
  enum class Slot : std::uint8_t { constant, number, alnum, block, novel };
  std::vector<Slot> slots;
  std::vector<std::string> words;  // the constant text for constant slots, empty otherwise

  std::size_t constant_count() const {
    return static_cast<std::size_t>(std::count(slots.begin(), slots.end(), Slot::constant));
  }
};

/// Draws template skeletons and parameter values. Constants never contain a
/// digit or the letters q and z; alphanumeric parameters always contain a
/// digit; injected novel tokens start with "zq" and are unique per call.
class SyntheticVocabulary {
 public:
  explicit SyntheticVocabulary(std::uint64_t seed) : rng_(seed) {}

  std::string fresh_word() {
    static constexpr std::string_view consonants = "bcdfghjklmnprstvw";
    static constexpr std::string_view vowels = "aeiouy";
    for (;;) {
      std::string w;
      const auto syllables = 2 + uniform_index(rng_, 3);
      for (std::size_t s = 0; s < syllables; ++s) {
        w += consonants[uniform_index(rng_, consonants.size())];
        w += vowels[uniform_index(rng_, vowels.size())];
      }
      if (used_.insert(w).second) return w;
    }
  }

  SyntheticTemplate make_template(bool with_block) {
    using Slot = SyntheticTemplate::Slot;
    SyntheticTemplate t;
    const std::size_t len = 4 + uniform_index(rng_, 7);      // 4..10 tokens
    const std::size_t max_params = (len - 1) / 2;             // keeps constants > len/2
    std::size_t params = 1 + uniform_index(rng_, max_params);
    t.slots.assign(len, Slot::constant);
    std::vector<std::size_t> positions;
    for (std::size_t i = 1; i < len; ++i) positions.push_back(i);
    shuffle(positions, rng_);
    positions.resize(params);
    std::sort(positions.begin(), positions.end());
    if (with_block) {
      // The block id takes the first chosen position >= 2; if only position 1
      // was chosen, it moves to a random later one.
      if (positions.back() < 2) positions.back() = 2 + uniform_index(rng_, len - 2);
      t.slots[*std::find_if(positions.begin(), positions.end(), [](std::size_t p) { return p >= 2; })] = Slot::block;
    }
    for (std::size_t p : positions) {
      if (t.slots[p] != Slot::constant) continue;
      const bool alnum = !with_block && p >= 2 && uniform_index(rng_, 2) == 0;
      t.slots[p] = alnum ? Slot::alnum : Slot::number;
    }
    t.words.resize(len);
    for (std::size_t i = 0; i < len; ++i)
      if (t.slots[i] == Slot::constant) t.words[i] = fresh_word();
    return t;
  }

  std::string number() {
    const auto digits = 1 + uniform_index(rng_, 4);
    std::uint64_t bound = 1;
    for (std::size_t i = 0; i < digits; ++i) bound *= 10;
    return std::to_string(uniform_index(rng_, bound));
  }

  std::string alnum() {
    static constexpr std::string_view letters = "ghjkmnprstuvwxy";
    std::string s;
    const auto n_letters = 2 + uniform_index(rng_, 3);
    for (std::size_t i = 0; i < n_letters; ++i) s += letters[uniform_index(rng_, letters.size())];
    s += std::to_string(uniform_index(rng_, 10000));
    return s;
  }

  std::string novel() {
    std::string s = "zq";
    std::uint64_t k = novel_count_++;
    do {
      s += static_cast<char>('a' + k % 26);
      k /= 26;
    } while (k != 0);
    return s;
  }

  Rng& rng() { return rng_; }

 private:
  Rng rng_;
  std::set<std::string> used_;
  std::uint64_t novel_count_ = 0;
};

/// One generated message with its ground truth.
struct SyntheticEvent {
  std::string message;
  std::size_t template_id = 0;
  bool anomaly = false;
  std::string block;  // hdfs-like only
};

namespace detail {

inline std::string render_template(const SyntheticTemplate& t, SyntheticVocabulary& v, std::string_view block) {
  using Slot = SyntheticTemplate::Slot;
  std::string out;
  for (std::size_t i = 0; i < t.slots.size(); ++i) {
    if (i) out += ' ';
    switch (t.slots[i]) {
      case Slot::constant: out += t.words[i]; break;
      case Slot::number: out += v.number(); break;
      case Slot::alnum: out += v.alnum(); break;
      case Slot::block: out += block; break;
      case Slot::novel: out += v.novel(); break;
    }
  }
  return out;
}

}  // namespace detail

/// In-memory corpus. Template ids 0..templates-1 are the normal templates;
/// when anomalies are requested, id `templates` is the anomaly template,
/// which ends in a novel token never produced anywhere else.
struct SyntheticCorpus {
  SyntheticSpec spec;
  std::vector<SyntheticTemplate> templates;
  std::vector<SyntheticEvent> events;
  std::vector<std::pair<std::string, bool>> blocks;  // hdfs-like: id and label, first-appearance order

  std::size_t distinct_templates() const {
    std::set<std::size_t> seen;
    for (const auto& e : events) seen.insert(e.template_id);
    return seen.size();
  }
};

namespace detail {

inline SyntheticTemplate anomaly_template(SyntheticVocabulary& v, bool with_block) {
  SyntheticTemplate t = v.make_template(with_block);
  t.slots.push_back(SyntheticTemplate::Slot::novel);
  t.words.emplace_back();
  // Appending a parameter must keep constants in the majority.
  while (t.constant_count() * 2 <= t.slots.size()) {
    t.slots.push_back(SyntheticTemplate::Slot::constant);
    t.words.push_back(v.fresh_word());
  }
  return t;
}

}  // namespace detail

/// bgl: `lines` independent messages, each anomalous with probability
/// anomaly_rate. Every normal template is used at least once when lines
/// allow it.
/// hdfs-like: blocks of 2..20 events drawn from the normal templates, blocks
/// interleaved in time. In an anomalous block one event uses the anomaly
/// template instead. Generation stops once `lines` events exist.
inline SyntheticCorpus generate_corpus(const SyntheticSpec& spec) {
  spec.validate();
  SyntheticCorpus c;
  c.spec = spec;
  SyntheticVocabulary v(spec.seed);
  const bool hdfs = spec.format == SyntheticFormat::hdfs_like;
  for (std::size_t t = 0; t < spec.templates; ++t) c.templates.push_back(v.make_template(hdfs));
  if (spec.anomaly_rate > 0) c.templates.push_back(detail::anomaly_template(v, hdfs));
  const std::size_t anomaly_id = spec.templates;
  Rng& rng = v.rng();

  if (!hdfs) {
    c.events.reserve(spec.lines);
    for (std::size_t i = 0; i < spec.lines; ++i) {
      SyntheticEvent e;
      e.anomaly = spec.anomaly_rate > 0 && uniform_unit(rng) < spec.anomaly_rate;
      if (e.anomaly) {
        e.template_id = anomaly_id;
      } else {
        e.template_id = i < spec.templates ? i : uniform_index(rng, spec.templates);
      }
      e.message = detail::render_template(c.templates[e.template_id], v, {});
      c.events.push_back(std::move(e));
    }
    // Shuffle so the guaranteed first occurrences are not clustered at the start.
    shuffle(c.events, rng);
    return c;
  }

  // hdfs-like: build per-block event lists, then interleave.
  std::vector<std::vector<SyntheticEvent>> block_events;
  std::size_t total = 0, next_template = 0;
  std::set<std::int64_t> used_ids;
  while (total < spec.lines) {
    std::int64_t raw;
    do {
      raw = static_cast<std::int64_t>(uniform_index(rng, 1ULL << 62)) - (1LL << 61);
    } while (!used_ids.insert(raw).second);
    const std::string id = "blk_" + std::to_string(raw);
    const bool anomaly = spec.anomaly_rate > 0 && uniform_unit(rng) < spec.anomaly_rate;
    std::size_t n = 2 + uniform_index(rng, 19);
    n = std::min(n, spec.lines - total);
    std::vector<SyntheticEvent> events;
    const std::size_t anomaly_at = anomaly ? uniform_index(rng, n) : n;
    for (std::size_t k = 0; k < n; ++k) {
      SyntheticEvent e;
      e.block = id;
      e.anomaly = anomaly;
      if (k == anomaly_at) {
        e.template_id = anomaly_id;
      } else if (next_template < spec.templates) {
        e.template_id = next_template++;
      } else {
        e.template_id = uniform_index(rng, spec.templates);
      }
      e.message = detail::render_template(c.templates[e.template_id], v, id);
      events.push_back(std::move(e));
    }
    total += n;
    c.blocks.emplace_back(id, anomaly);
    block_events.push_back(std::move(events));
  }
  // Random merge that keeps each block's own event order.
  std::vector<std::size_t> cursor(block_events.size(), 0), live;
  for (std::size_t b = 0; b < block_events.size(); ++b) live.push_back(b);
  const std::size_t window = 8;  // blocks open at once, like concurrent writers
  std::size_t opened = std::min(window, live.size());
  std::vector<std::size_t> open(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(opened));
  std::vector<std::pair<std::string, bool>> order;
  while (!open.empty()) {
    const std::size_t slot = uniform_index(rng, open.size());
    const std::size_t b = open[slot];
    if (cursor[b] == 0) order.push_back(c.blocks[b]);
    c.events.push_back(std::move(block_events[b][cursor[b]++]));
    if (cursor[b] == block_events[b].size()) {
      if (opened < live.size()) {
        open[slot] = live[opened++];
      } else {
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(slot));
      }
    }
  }
  c.blocks = std::move(order);
  return c;
}

inline Labels line_labels(const SyntheticCorpus& c) {
  Labels out;
  for (const auto& e : c.events) out.push_back(e.anomaly ? 1 : 0);
  return out;
}

namespace detail {

inline void write_bgl_line(std::string& out, const SyntheticEvent& e, std::int64_t epoch, Rng& rng) {
  const std::string stamp = format_timestamp(from_epoch_seconds(epoch));  // YYYY-MM-DD HH:MM:SS.ffffff
  char node[40];
  std::snprintf(node, sizeof node, "R%02u-M%u-N%X-C:J%02u-U%02u", static_cast<unsigned>(uniform_index(rng, 64)),
                static_cast<unsigned>(uniform_index(rng, 2)), static_cast<unsigned>(uniform_index(rng, 16)),
                static_cast<unsigned>(2 + uniform_index(rng, 16)), uniform_index(rng, 2) ? 11u : 1u);
  out += e.anomaly ? "KERNDTLB" : "-";
  out += ' ';
  out += std::to_string(epoch);
  out += ' ';
  out.append(stamp, 0, 4);
  out += '.';
  out.append(stamp, 5, 2);
  out += '.';
  out.append(stamp, 8, 2);
  out += ' ';
  out += node;
  out += ' ';
  out.append(stamp, 0, 10);
  out += '-';
  out.append(stamp, 11, 2);
  out += '.';
  out.append(stamp, 14, 2);
  out += '.';
  out.append(stamp, 17, 9);
  out += ' ';
  out += node;
  out += e.anomaly ? " RAS KERNEL FATAL " : " RAS KERNEL INFO ";
  out += e.message;
  out += '\n';
}

inline void write_hdfs_line(std::string& out, const SyntheticEvent& e, std::int64_t epoch, Rng& rng) {
  const std::string stamp = format_timestamp(from_epoch_seconds(epoch));
  out.append(stamp, 2, 2);
  out.append(stamp, 5, 2);
  out.append(stamp, 8, 2);
  out += ' ';
  out.append(stamp, 11, 2);
  out.append(stamp, 14, 2);
  out.append(stamp, 17, 2);
  out += ' ';
  out += std::to_string(1 + uniform_index(rng, 40000));
  out += " INFO dfs.DataNode$PacketResponder: ";
  out += e.message;
  out += '\n';
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

}  // namespace detail

struct SyntheticFiles {
  std::filesystem::path log;
  std::optional<std::filesystem::path> labels;  // hdfs-like block labels
  std::filesystem::path ground_truth;           // line,template_id,label
};

/// Writes a corpus in its on-disk log format plus ground truth.
/// Output is a pure function of the corpus and `seed`.
inline SyntheticFiles write_corpus(const SyntheticCorpus& c, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const bool hdfs = c.spec.format == SyntheticFormat::hdfs_like;
  SyntheticFiles files;
  files.log = dir / (hdfs ? "synthetic_hdfs.log" : "synthetic_bgl.log");
  files.ground_truth = dir / "ground_truth.csv";

  Rng rng(derive_seed(c.spec.seed, 1));
  std::int64_t epoch = hdfs ? 1226262000 : 1117838570;
  std::string buf;
  {
    auto os = detail::open_output(files.log);
    for (const auto& e : c.events) {
      epoch += static_cast<std::int64_t>(uniform_index(rng, 3));
      if (hdfs) {
        detail::write_hdfs_line(buf, e, epoch, rng);
      } else {
        detail::write_bgl_line(buf, e, epoch, rng);
      }
      if (buf.size() > (1u << 20)) {
        os << buf;
        buf.clear();
      }
    }
    os << buf;
    if (!os) throw IoError("write failed: " + files.log.string());
  }
  {
    auto os = detail::open_output(files.ground_truth);
    os << "line,template_id,label\n";
    for (std::size_t i = 0; i < c.events.size(); ++i)
      os << i << ',' << c.events[i].template_id << ',' << (c.events[i].anomaly ? "Anomaly" : "Normal") << '\n';
  }
  if (hdfs) {
    files.labels = dir / "anomaly_label.csv";
    auto os = detail::open_output(*files.labels);
    os << "BlockId,Label\n";
    for (const auto& [id, anomaly] : c.blocks) os << id << ',' << (anomaly ? "Anomaly" : "Normal") << '\n';
  }
  return files;
}

/// Streams a large bgl-format file without holding the corpus in memory.
/// Returns the number of lines written.
inline std::size_t write_bgl_stream(const SyntheticSpec& spec, const std::filesystem::path& path) {
  spec.validate();
  SyntheticVocabulary v(spec.seed);
  std::vector<SyntheticTemplate> templates;
  for (std::size_t t = 0; t < spec.templates; ++t) templates.push_back(v.make_template(false));
  const auto anomaly = detail::anomaly_template(v, false);
  Rng rng(derive_seed(spec.seed, 1));
  auto os = detail::open_output(path);
  std::string buf;
  std::int64_t epoch = 1117838570;
  for (std::size_t i = 0; i < spec.lines; ++i) {
    SyntheticEvent e;
    e.anomaly = spec.anomaly_rate > 0 && uniform_unit(v.rng()) < spec.anomaly_rate;
    e.template_id = e.anomaly ? spec.templates : uniform_index(v.rng(), spec.templates);
    e.message = detail::render_template(e.anomaly ? anomaly : templates[e.template_id], v, {});
    epoch += static_cast<std::int64_t>(uniform_index(rng, 3));
    detail::write_bgl_line(buf, e, epoch, rng);
    if (buf.size() > (1u << 20)) {
      os << buf;
      buf.clear();
    }
  }
  os << buf;
  if (!os) throw IoError("write failed: " + path.string());
  return spec.lines;
}

}  // namespace loglead
