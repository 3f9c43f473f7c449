#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "tqkd/dataio.hpp"

namespace tqkd::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kUsageError = 2,
  kNumericalFailure = 3,
};

/// A numerical failure with the context (grid row, file) it happened in; maps to exit code 3.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandConfig {
  std::string subcommand;
  std::string channel;
  int dim = 0;
  std::string protocols = "qst,rfi";
  std::string range;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;  // 0 selects the per-command default
  std::string out;
  std::string input;
  double noise = 0.0;
  std::string convention;
  std::string suite;
};

SweepResult cmd_sweep(const CommandConfig& config);
nlohmann::ordered_json cmd_tomography(const CommandConfig& config);
JointProbabilityTable cmd_fixture(const CommandConfig& config);

/// Parses argv, runs the subcommand and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tqkd::cli
