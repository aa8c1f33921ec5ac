#pragma once

#include <stdexcept>
#include <string>

namespace loglead {

// Error taxonomy. The CLI maps these onto exit codes (see tools/loglead.cpp).

/// Bad user-supplied configuration (rule files, pipeline configs, parameters).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model could not be trained on the given data (e.g. single-class LR).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure inside a pipeline stage; carries the stage name for diagnostics.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error("[" + stage + "] " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace loglead
