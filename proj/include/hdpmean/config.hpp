#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hdpmean {

/// Structured mirror of the CLI flags; serializes to JSON and parses back
/// losslessly (including "inf" levels).
struct ExperimentConfig {
  std::string command;
  std::vector<std::string> mechanisms;
  std::optional<double> eps1, eps2;
  std::optional<long> n;
  std::optional<double> f;
  std::optional<std::string> eps_file;
  std::string dist = "uniform";
  long trials = 200000;
  std::uint64_t seed = 0;
  std::string output;
  std::string format = "csv";
  int threads = 1;
  bool clamp = false;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);

  bool operator==(const ExperimentConfig&) const = default;
};

}  // namespace hdpmean
