#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "covbounds/matrices.hpp"

namespace covbounds::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNumericalFailure = 3;

struct RunConfig {
  std::string subcommand;  // variance | cov | matrix | qp | oracle | estimate | check
  std::string input;
  std::string output;  // empty: returned in RunResult::output
  std::string format = "json";
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  int grid = 200;
  std::string order = "maximin";
  double widen = 1.0;
  double tolerance = 1e-2;  // oracle agreement threshold reported in `within_tolerance`
  bool allow_non_psd = false;
  bool witness = false;
  std::uint64_t seed = kDefaultSampleSeed;
  std::size_t samples = 1000;
};

struct RunResult {
  int exit_code = kExitOk;
  std::string output;       // serialized report (empty when written to RunConfig::output)
  std::string diagnostics;  // one line per warning or error
};

RunResult run(const RunConfig& config);

/// Parses argv into a RunConfig, runs it and writes to stdout/stderr.
int main_entry(int argc, char** argv);

}  // namespace covbounds::cli
