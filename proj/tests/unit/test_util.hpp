#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "loglead/loglead.hpp"

namespace testutil {

inline std::filesystem::path data(const std::string& name) { return std::filesystem::path(LOGLEAD_TEST_DATA) / name; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("loglead_" + tag + "_" + std::to_string(rng() % 1000000007));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  os << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline loglead::TextColumn texts(const std::vector<std::string>& v) {
  loglead::TextColumn c;
  for (const auto& s : v) c.push_back(s);
  return c;
}

inline std::vector<std::int64_t> ids(const loglead::Int64Column& c) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < c.size(); ++i) out.push_back(c[i]);
  return out;
}

inline std::vector<std::vector<std::string>> docs_of(const loglead::TextListColumn& c) {
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.emplace_back();
    for (auto t : c[i]) out.back().emplace_back(t);
  }
  return out;
}

}  // namespace testutil
