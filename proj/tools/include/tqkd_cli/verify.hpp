#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tqkd::cli {

struct VerifyOptions {
  std::uint64_t seed = 42;
  int samples = 0;  // suite-specific default when 0
  std::string input;       // probability table for the table suite
  std::string convention;  // overrides the file's declared convention when set
};

struct Violation {
  std::string check;
  std::string detail;  // seed / parameters that triggered it
  double margin;       // how far past the tolerance
};

struct VerifyReport {
  std::string suite;
  long checks = 0;
  std::vector<Violation> violations;

  bool passed() const noexcept { return violations.empty(); }
};

std::vector<std::string> verify_suites();

/// Throws UsageError for an unknown suite name.
VerifyReport run_verify(std::string_view suite, const VerifyOptions& options);

VerifyReport verify_inequalities(const VerifyOptions& options);
VerifyReport verify_mub(const VerifyOptions& options);
VerifyReport verify_roundtrip(const VerifyOptions& options);
VerifyReport verify_closed_forms(const VerifyOptions& options);
/// Checks that a measured table is consistent with a completely positive, trace-preserving channel.
VerifyReport verify_table(const VerifyOptions& options);

}  // namespace tqkd::cli
