#pragma once

// Plain-text formats: probability tables, sweep results and noisy fixtures.
// Numbers are written with std::to_chars, so files are locale independent.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tqkd/channels.hpp"
#include "tqkd/keyrate.hpp"
#include "tqkd/tomography.hpp"

namespace tqkd {

enum class TableConvention {
  BlockNormalizedJoint,  // each (γ,η) block is a joint distribution
  RowConditional,        // each row of a block is p(s | l); Alice's outcomes are taken as uniform
};

std::string_view to_string(TableConvention c) noexcept;
TableConvention parse_convention(std::string_view name);

struct TableReadResult {
  JointProbabilityTable table;
  TableConvention convention;
  double correction;  // largest |block sum − 1| removed by renormalization
};

/// Experimental tolerance: blocks may be off by 1e-3 and entries as low as −1e-6.
/// `convention` overrides the one declared in the file.
TableReadResult parse_probability_table(std::istream& in, std::optional<TableConvention> convention = std::nullopt);
TableReadResult read_probability_table(const std::filesystem::path& path,
                                       std::optional<TableConvention> convention = std::nullopt);

std::string format_probability_table(const JointProbabilityTable& table);
void write_probability_table(const JointProbabilityTable& table, const std::filesystem::path& path);

/// Every entry scaled by (1 + σ·N(0,1)), clamped at zero, then each block renormalized.
JointProbabilityTable perturb_table(const JointProbabilityTable& table, double sigma, std::uint64_t seed);

void write_fixture(const KrausChannel& ch, double sigma, std::uint64_t seed, const std::filesystem::path& path);

struct SweepRow {
  double parameter = 0.0;
  std::vector<KeyRateReport> reports;  // same order as SweepResult::protocols
};

struct SweepResult {
  std::string channel;
  std::string parameter;
  std::vector<Protocol> protocols;
  std::vector<SweepRow> rows;
};

/// Comment header, column header, one row per parameter value; 12 significant digits.
std::string format_sweep(const SweepResult& result);
void write_sweep(const SweepResult& result, const std::filesystem::path& path);
SweepResult parse_sweep(std::istream& in);
SweepResult read_sweep(const std::filesystem::path& path);

/// Shortest round-trip decimal (or `digits` significant digits when given).
std::string format_double(double v, std::optional<int> digits = std::nullopt);

}  // namespace tqkd
