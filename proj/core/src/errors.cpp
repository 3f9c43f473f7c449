#include "tqkd/errors.hpp"

namespace tqkd {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDistribution: return "invalid-distribution";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::NotPositiveSemidefinite: return "not-positive-semidefinite";
    case ErrorCode::UnsupportedDimension: return "unsupported-dimension";
    case ErrorCode::ZeroProbabilityOutcome: return "zero-probability-outcome";
    case ErrorCode::InvalidChannel: return "invalid-channel";
    case ErrorCode::NotCompletelyPositive: return "not-completely-positive";
    case ErrorCode::InconsistentData: return "inconsistent-data";
    case ErrorCode::ReconstructionFailure: return "reconstruction-failure";
    case ErrorCode::InconsistentStatistics: return "inconsistent-statistics";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace tqkd
