#include "tqkd_cli/verify.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "tqkd/channels.hpp"
#include "tqkd/dataio.hpp"
#include "tqkd/errors.hpp"
#include "tqkd/keyrate.hpp"
#include "tqkd/tomography.hpp"
#include "tqkd_cli/channel_model.hpp"

namespace tqkd::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTableTolerance = 1e-6;

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

KrausChannel random_channel(int d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, d * d);
  const int n = count(rng);
  return random_kraus_channel(d, n, rng);
}

std::string where(std::uint64_t seed, std::uint64_t index) {
  return "seed=" + std::to_string(seed) + " index=" + std::to_string(index);
}

// Records a check `value <= bound`.
void expect_le(VerifyReport& r, double value, double bound, const std::string& check, const std::string& detail) {
  ++r.checks;
  if (!(value <= bound)) r.violations.push_back({check, detail, value - bound});
}

void expect_close(VerifyReport& r, double a, double b, double tolerance, const std::string& check,
                  const std::string& detail) {
  ++r.checks;
  const double diff = std::abs(a - b);
  if (!(diff <= tolerance)) r.violations.push_back({check, detail, diff - tolerance});
}

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

double ad_qst(double p) {
  return 1.0 + 0.5 * binary_entropy(p) - binary_entropy(p / 2) - (1.0 + p) / 2 * binary_entropy(1.0 / (1.0 + p));
}

double ad_rfi(double p) {
  const double s = std::sqrt(1.0 - p);
  return 1.0 + 2.0 * xlog2x(p / 4) + xlog2x((2.0 - p - 2.0 * s) / 4) + xlog2x((2.0 - p + 2.0 * s) / 4);
}

double prob_rotation_qst(double a) {
  const double c = std::cos(a);
  return 1.0 - binary_entropy((1.0 - c) / 4) - binary_entropy((1.0 - c) / 2) +
         binary_entropy((1.0 + std::sqrt((1.0 + c * c) / 2)) / 2);
}

double prob_rotation_rfi(double a) {
  const double c = std::cos(a);
  return (1.0 + c) / 2 - binary_entropy((1.0 + c) / 2);
}

std::string param(const char* name, double v) {
  std::ostringstream os;
  os.precision(17);
  os << name << '=' << v;
  return os.str();
}

}  // namespace

std::vector<std::string> verify_suites() { return {"inequalities", "mub", "roundtrip", "closed-forms", "table"}; }

VerifyReport run_verify(std::string_view suite, const VerifyOptions& options) {
  if (suite == "inequalities") return verify_inequalities(options);
  if (suite == "mub") return verify_mub(options);
  if (suite == "roundtrip") return verify_roundtrip(options);
  if (suite == "closed-forms") return verify_closed_forms(options);
  if (suite == "table") return verify_table(options);
  throw UsageError("unknown verify suite '" + std::string(suite) + "'");
}

VerifyReport verify_inequalities(const VerifyOptions& options) {
  VerifyReport r{"inequalities", 0, {}};
  const int qubits = options.samples > 0 ? options.samples : 1000;
  const int qudits = std::max(1, qubits / 5);
  const double tol = 1e-9;

  for (int i = 0; i < qubits; ++i) {
    auto rng = substream(options.seed, static_cast<std::uint64_t>(i));
    const DensityMatrix rho = kraus_to_joint_state(random_channel(2, rng));
    expect_le(r, rfi_rate(rho).raw_rate - tol, qst_rate(rho).raw_rate, "qubit qst >= rfi", where(options.seed, i));
  }

  for (int i = 0; i < qudits; ++i) {
    const auto index = static_cast<std::uint64_t>(1'000'000 + i);
    auto rng = substream(options.seed, index);
    const DensityMatrix rho = kraus_to_joint_state(random_channel(3, rng));
    const KeyRateReport qst = qst_rate(rho);
    const KeyRateReport dp = evaluate(Protocol::DPlus1, rho);
    expect_le(r, dp.raw_rate - tol, qst.raw_rate, "qutrit qst >= dplus1", where(options.seed, index));
    expect_le(r, qst.holevo, holevo_qudit(bell_diagonal_part(rho)) + tol, "holevo <= bell-diagonal holevo",
              where(options.seed, index));
  }

  // Eve keeps the purification of the mixing register, so χ of a mixture is at least the average.
  for (int i = 0; i < qudits; ++i) {
    const auto index = static_cast<std::uint64_t>(2'000'000 + i);
    auto rng = substream(options.seed, index);
    const int d = i % 2 == 0 ? 2 : 3;
    const KrausChannel a = random_channel(d, rng);
    const KrausChannel b = random_channel(d, rng);
    const double chi_a = holevo_qudit(kraus_to_joint_state(a));
    const double chi_b = holevo_qudit(kraus_to_joint_state(b));
    for (double lambda : {0.25, 0.5, 0.75}) {
      const double chi_mix = holevo_qudit(kraus_to_joint_state(mix_channels(a, b, lambda)));
      expect_le(r, lambda * chi_a + (1.0 - lambda) * chi_b, chi_mix + tol, "holevo of mixture >= average",
                where(options.seed, index) + " " + param("lambda", lambda));
    }
  }
  return r;
}

VerifyReport verify_mub(const VerifyOptions&) {
  VerifyReport r{"mub", 0, {}};
  const double tol = 1e-12;
  for (int d : {2, 3, 5, 7}) {
    const MubFamily mubs = mub_family(d);
    const std::string dim = "d=" + std::to_string(d);
    for (int g = 0; g <= d; ++g) {
      const ComplexMatrix& b = mubs.basis(g);
      const double unitarity = (b.adjoint() * b - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
      expect_le(r, unitarity, tol, "orthonormal basis", dim + " family=" + std::to_string(g));

      for (int h = g + 1; h <= d; ++h) {
        const RealMatrix overlaps = (b.adjoint() * mubs.basis(h)).cwiseAbs2();
        const double dev = (overlaps.array() - 1.0 / d).abs().maxCoeff();
        expect_le(r, dev, tol, "unbiased pair", dim + " families=" + std::to_string(g) + "," + std::to_string(h));
      }

      const auto [j, k] = mubs.weyl_label(g);
      const ComplexMatrix u = weyl_operator(j, k, d);
      const Complex base = mubs.vector(g, 0).dot(u * mubs.vector(g, 0));
      for (int m = 0; m < d; ++m) {
        const ComplexVector v = mubs.vector(g, m);
        const Complex e = v.dot(u * v);
        const double eig_dev = (u * v - e * v).norm();
        const double shift_dev = std::abs(e - base * root_of_unity(m, d));
        expect_le(r, std::max(eig_dev, shift_dev), 1e-10, "Weyl eigenbasis with label shift",
                  dim + " family=" + std::to_string(g) + " m=" + std::to_string(m));
      }
    }
  }
  return r;
}

VerifyReport verify_roundtrip(const VerifyOptions& options) {
  VerifyReport r{"roundtrip", 0, {}};
  const int per_dim = options.samples > 0 ? options.samples : 20;
  for (int d : {2, 3, 5}) {
    for (int i = 0; i < per_dim; ++i) {
      const auto index = static_cast<std::uint64_t>(d * 1'000'000 + i);
      auto rng = substream(options.seed, index);
      const KrausChannel ch = random_channel(d, rng);
      const ProcessMatrix chi = solve_process_matrix(predict_probabilities(ch));
      const double td = trace_distance(process_to_joint_state(chi), kraus_to_joint_state(ch));
      expect_le(r, td, 1e-8, "tomography round trip", "d=" + std::to_string(d) + " " + where(options.seed, index));
    }
  }
  for (int i = 0; i < 100; ++i) {
    const auto index = static_cast<std::uint64_t>(9'000'000 + i);
    auto rng = substream(options.seed, index);
    const AffineQubitChannel ch = kraus_to_affine(random_channel(2, rng));
    const AffineQubitChannel back = affine_from_biases(biases_from_channel(ch));
    const double dev = std::max((back.R - ch.R).cwiseAbs().maxCoeff(), (back.t - ch.t).cwiseAbs().maxCoeff());
    expect_le(r, dev, 1e-10, "bias round trip", where(options.seed, index));
  }
  return r;
}

VerifyReport verify_closed_forms(const VerifyOptions&) {
  VerifyReport r{"closed-forms", 0, {}};
  const double tol = 1e-9;
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    const DensityMatrix rho = affine_to_joint_state(amplitude_damping_qubit(p));
    expect_close(r, qst_rate(rho).raw_rate, ad_qst(p), tol, "amplitude damping qst", param("p", p));
    expect_close(r, rfi_rate(rho).raw_rate, ad_rfi(p), tol, "amplitude damping rfi", param("p", p));
  }
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      const double ax = kPi * i / 15.0;
      const double ay = kPi * j / 15.0;
      const DensityMatrix rho = affine_to_joint_state(rotation(ay, ax, 0.0));
      const double expected = 1.0 - binary_entropy((1.0 + std::cos(ax) * std::cos(ay)) / 2);
      const std::string at = param("ax", ax) + " " + param("ay", ay);
      const KeyRateReport qst = qst_rate(rho);
      expect_close(r, qst.raw_rate, expected, tol, "rotation qst", at);
      expect_close(r, rfi_rate(rho).raw_rate, expected, tol, "rotation rfi", at);
      expect_close(r, qst.holevo, 0.0, tol, "rotation holevo", at);
    }
  }
  for (int i = 1; i < 100; ++i) {
    const double a = kPi * i / 100.0;
    const DensityMatrix rho = affine_to_joint_state(probabilistic_rotation(a));
    expect_close(r, qst_rate(rho).raw_rate, prob_rotation_qst(a), tol, "probabilistic rotation qst", param("alpha", a));
    expect_close(r, rfi_rate(rho).raw_rate, prob_rotation_rfi(a), tol, "probabilistic rotation rfi", param("alpha", a));
    expect_close(r, von_neumann_entropy(rho), binary_entropy((1.0 - std::cos(a)) / 4), tol,
                 "probabilistic rotation joint entropy", param("alpha", a));
  }
  return r;
}

VerifyReport verify_table(const VerifyOptions& options) {
  if (options.input.empty()) throw UsageError("the table suite needs --input");
  std::optional<TableConvention> convention;
  if (!options.convention.empty()) convention = parse_convention(options.convention);
  const TableReadResult read = read_probability_table(options.input, convention);

  VerifyReport r{"table", 0, {}};
  SolveOptions solve;
  solve.exact_input = false;
  const ProcessMatrix chi = solve_process_matrix(read.table, solve);
  expect_le(r, chi.residual, kTableTolerance, "linear consistency", options.input);
  expect_le(r, chi.clipped_weight, kTableTolerance, "positive joint state", options.input);
  expect_le(r, chi.trace_preservation_error, kTableTolerance, "trace preservation", options.input);

  ++r.checks;
  try {
    const BellSpectrum s = bell_lambdas(error_vectors(read.table));
    if (s.clipped) r.violations.push_back({"Bell spectrum", options.input + ": negative weight clipped", 0.0});
  } catch (const Error& e) {
    r.violations.push_back({"Bell spectrum", options.input + ": " + e.what(), 0.0});
  }
  return r;
}

}  // namespace tqkd::cli
