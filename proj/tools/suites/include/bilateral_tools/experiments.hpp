#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bilateral_tools/config.hpp"
#include "bilateral_tools/report.hpp"

namespace bilateral::tools {

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"solve",   "derivative",     "mosco",
                                              "control", "counterexample", "verify-all"};
  return names;
}

/// Everything an experiment produces, before anything touches the disk.
struct ExperimentOutput {
  std::string experiment;
  Json report;
  /// File name and contents, the JSON report first.
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// Runs cfg.experiment. Throws ConfigError for an unknown experiment name and
/// lets bilateral::Error from the computation propagate.
ExperimentOutput run_experiment(const RunConfig& cfg);

ExperimentOutput run_solve(const RunConfig& cfg);
ExperimentOutput run_derivative(const RunConfig& cfg);
ExperimentOutput run_mosco(const RunConfig& cfg);
ExperimentOutput run_control(const RunConfig& cfg);
ExperimentOutput run_counterexample(const RunConfig& cfg);
ExperimentOutput run_verify_all(const RunConfig& cfg);

/// Creates `dir` if needed and writes every file. Throws IoError.
void write_outputs(const ExperimentOutput& output, const std::string& dir);

}  // namespace bilateral::tools
