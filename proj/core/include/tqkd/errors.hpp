#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tqkd {

enum class ErrorCode {
  InvalidDistribution,
  Domain,
  NotPositiveSemidefinite,
  UnsupportedDimension,
  ZeroProbabilityOutcome,
  InvalidChannel,
  NotCompletelyPositive,
  InconsistentData,
  ReconstructionFailure,
  InconsistentStatistics,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this one exception type; callers
// that care about the category inspect code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tqkd
