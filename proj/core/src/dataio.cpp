#include "tqkd/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "tqkd/errors.hpp"

namespace tqkd {

namespace {

constexpr double kNegativeEntryLimit = -1e-6;
constexpr double kRoundingTolerance = 1e-12;
constexpr double kExperimentalBlockTolerance = 1e-3;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string location(int line, int column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

double parse_number(std::string_view field, int line, int column) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw Error(ErrorCode::Parse, location(line, column) + ": '" + std::string(field) + "' is not a number");
  }
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string_view field_name(int index) {
  static constexpr std::string_view names[] = {"mutual_information", "holevo", "raw_rate", "clipped_rate"};
  return names[index];
}

}  // namespace

std::string format_double(double v, std::optional<int> digits) {
  char buf[64];
  const auto res = digits ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, *digits)
                          : std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string_view to_string(TableConvention c) noexcept {
  return c == TableConvention::RowConditional ? "row-conditional" : "block-normalized-joint";
}

TableConvention parse_convention(std::string_view name) {
  if (name == "block-normalized-joint") return TableConvention::BlockNormalizedJoint;
  if (name == "row-conditional") return TableConvention::RowConditional;
  throw Error(ErrorCode::Parse, "unknown table convention '" + std::string(name) + "'");
}

TableReadResult parse_probability_table(std::istream& in, std::optional<TableConvention> convention) {
  int d = 0;
  std::optional<TableConvention> declared;
  std::vector<std::vector<double>> rows;
  std::string raw;
  int line_no = 0;
  int n = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');

    if (fields[0] == "dim") {
      if (fields.size() != 2) throw Error(ErrorCode::Parse, location(line_no, 1) + ": expected 'dim,<d>'");
      const double v = parse_number(fields[1], line_no, 2);
      d = static_cast<int>(v);
      if (d != v || !is_prime(d)) {
        throw Error(ErrorCode::Parse, location(line_no, 2) + ": dimension must be a prime integer");
      }
      n = d * (d + 1);
      continue;
    }
    if (fields[0] == "convention") {
      if (fields.size() != 2) throw Error(ErrorCode::Parse, location(line_no, 1) + ": expected 'convention,<name>'");
      try {
        declared = parse_convention(fields[1]);
      } catch (const Error& e) {
        throw Error(ErrorCode::Parse, location(line_no, 2) + ": " + e.what());
      }
      continue;
    }
    if (d == 0) throw Error(ErrorCode::Parse, location(line_no, 1) + ": data row before 'dim' header");

    const int row = static_cast<int>(rows.size()) + 1;
    if (row > n) throw Error(ErrorCode::Parse, location(line_no, 1) + ": more than " + std::to_string(n) + " data rows");
    if (static_cast<int>(fields.size()) != n) {
      throw Error(ErrorCode::Parse, location(line_no, 1) + ": data row " + std::to_string(row) + " has " +
                                        std::to_string(fields.size()) + " entries, expected " + std::to_string(n));
    }
    std::vector<double> values;
    values.reserve(fields.size());
    for (int c = 0; c < n; ++c) {
      double v = parse_number(fields[static_cast<std::size_t>(c)], line_no, c + 1);
      if (v < kNegativeEntryLimit) {
        throw Error(ErrorCode::Parse, location(line_no, c + 1) + ": data row " + std::to_string(row) +
                                          " has negative probability " + std::string(fields[static_cast<std::size_t>(c)]));
      }
      values.push_back(std::max(0.0, v));
    }
    rows.push_back(std::move(values));
  }

  if (d == 0) throw Error(ErrorCode::Parse, "missing 'dim' header");
  if (static_cast<int>(rows.size()) != n) {
    throw Error(ErrorCode::Parse, "expected " + std::to_string(n) + " data rows, found " + std::to_string(rows.size()));
  }

  const TableConvention used = convention.value_or(declared.value_or(TableConvention::BlockNormalizedJoint));
  RealMatrix p(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) p(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  if (used == TableConvention::RowConditional) p /= static_cast<double>(d);

  double correction = 0.0;
  for (int g = 0; g <= d; ++g) {
    for (int e = 0; e <= d; ++e) {
      auto block = p.block(g * d, e * d, d, d);
      const double sum = block.sum();
      const double dev = std::abs(sum - 1.0);
      if (dev > kExperimentalBlockTolerance) {
        throw Error(ErrorCode::Parse, "block (" + std::to_string(g) + ", " + std::to_string(e) + ") sums to " +
                                          format_double(sum) + ", outside 1e-3 of 1");
      }
      correction = std::max(correction, dev);
      // rounding-level deviations are left alone so written tables read back bit for bit
      if (dev > kRoundingTolerance) block /= sum;
    }
  }
  return {JointProbabilityTable(d, std::move(p)), used, correction};
}

TableReadResult read_probability_table(const std::filesystem::path& path, std::optional<TableConvention> convention) {
  std::ifstream in = open_input(path);
  try {
    return parse_probability_table(in, convention);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string format_probability_table(const JointProbabilityTable& table) {
  std::string out = "dim," + std::to_string(table.dim()) + "\nconvention,block-normalized-joint\n";
  const RealMatrix& p = table.matrix();
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      if (c) out += ',';
      out += format_double(p(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_probability_table(const JointProbabilityTable& table, const std::filesystem::path& path) {
  write_text(path, format_probability_table(table));
}

JointProbabilityTable perturb_table(const JointProbabilityTable& table, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw Error(ErrorCode::Domain, "noise level must be nonnegative");
  if (sigma == 0.0) return table;
  const int d = table.dim();
  RealMatrix p = table.matrix();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    for (Eigen::Index c = 0; c < p.cols(); ++c) p(r, c) = std::max(0.0, p(r, c) * (1.0 + sigma * normal(rng)));
  }
  for (int g = 0; g <= d; ++g) {
    for (int e = 0; e <= d; ++e) {
      auto block = p.block(g * d, e * d, d, d);
      block /= block.sum();
    }
  }
  return JointProbabilityTable(d, std::move(p));
}

void write_fixture(const KrausChannel& ch, double sigma, std::uint64_t seed, const std::filesystem::path& path) {
  write_probability_table(perturb_table(predict_probabilities(ch), sigma, seed), path);
}

std::string format_sweep(const SweepResult& result) {
  std::string out = "# channel: " + result.channel + "\n# parameter: " + result.parameter + "\n# protocols: ";
  for (std::size_t i = 0; i < result.protocols.size(); ++i) {
    if (i) out += ',';
    out += to_string(result.protocols[i]);
  }
  out += "\nparam";
  for (Protocol p : result.protocols) {
    for (int f = 0; f < 4; ++f) {
      out += ',';
      out += to_string(p);
      out += '_';
      out += field_name(f);
    }
  }
  out += '\n';
  for (const SweepRow& row : result.rows) {
    if (row.reports.size() != result.protocols.size()) {
      throw Error(ErrorCode::Domain, "sweep row has the wrong number of reports");
    }
    out += format_double(row.parameter, 12);
    for (const KeyRateReport& r : row.reports) {
      for (double v : {r.mutual_information, r.holevo, r.raw_rate, r.clipped_rate}) {
        out += ',';
        out += format_double(v, 12);
      }
    }
    out += '\n';
  }
  return out;
}

void write_sweep(const SweepResult& result, const std::filesystem::path& path) {
  write_text(path, format_sweep(result));
}

SweepResult parse_sweep(std::istream& in) {
  SweepResult result;
  std::string raw;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      const std::string_view key = trim(body.substr(0, colon));
      const std::string_view value = trim(body.substr(colon + 1));
      if (key == "channel") result.channel = std::string(value);
      if (key == "parameter") result.parameter = std::string(value);
      if (key == "protocols") {
        result.protocols.clear();
        for (auto name : split(value, ',')) {
          if (!name.empty()) result.protocols.push_back(parse_protocol(name));
        }
      }
      continue;
    }
    const auto fields = split(line, ',');
    const std::size_t expected = 1 + 4 * result.protocols.size();
    if (!have_header) {
      if (fields.size() != expected || fields[0] != "param") {
        throw Error(ErrorCode::Parse, location(line_no, 1) + ": column header does not match the protocol list");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != expected) {
      throw Error(ErrorCode::Parse, location(line_no, 1) + ": expected " + std::to_string(expected) + " columns");
    }
    SweepRow row;
    row.parameter = parse_number(fields[0], line_no, 1);
    for (std::size_t p = 0; p < result.protocols.size(); ++p) {
      double v[4];
      for (int f = 0; f < 4; ++f) {
        const int col = static_cast<int>(1 + 4 * p) + f;
        v[f] = parse_number(fields[static_cast<std::size_t>(col)], line_no, col + 1);
      }
      KeyRateReport r;
      r.protocol = result.protocols[p];
      r.mutual_information = v[0];
      r.holevo = v[1];
      r.raw_rate = v[2];
      r.clipped_rate = v[3];
      row.reports.push_back(r);
    }
    result.rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorCode::Parse, "sweep file has no column header");
  return result;
}

SweepResult read_sweep(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_sweep(in);
}

}  // namespace tqkd
