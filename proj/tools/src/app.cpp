#include "tqkd_cli/app.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tqkd/errors.hpp"
#include "tqkd/keyrate.hpp"
#include "tqkd/tomography.hpp"
#include "tqkd_cli/channel_model.hpp"
#include "tqkd_cli/verify.hpp"

namespace tqkd::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr std::int64_t kDefaultDriftSamples = 100000;
constexpr double kNoisyResidualThreshold = 1e-6;

bool is_usage(ErrorCode code) {
  return code == ErrorCode::Domain || code == ErrorCode::Parse || code == ErrorCode::UnsupportedDimension ||
         code == ErrorCode::Io;
}

ModelOptions model_options(const CommandConfig& c) {
  ModelOptions o;
  o.dim = c.dim;
  o.seed = c.seed;
  o.samples = c.samples > 0 ? c.samples : kDefaultDriftSamples;
  return o;
}

json matrix_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ri = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return json{{"real", std::move(re)}, {"imag", std::move(im)}};
}

json report_json(const KeyRateReport& r) {
  json j{{"mutual_information", r.mutual_information},
         {"holevo", r.holevo},
         {"raw_rate", r.raw_rate},
         {"clipped_rate", r.clipped_rate},
         {"warning", r.warning}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
  f << text;
}

json verify_json(const VerifyReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) violations.push_back({{"check", v.check}, {"detail", v.detail}, {"margin", v.margin}});
  return json{{"suite", r.suite},
              {"passed", r.passed()},
              {"checks", r.checks},
              {"violations", r.violations.size()},
              {"details", std::move(violations)}};
}

}  // namespace

SweepResult cmd_sweep(const CommandConfig& config) {
  if (config.channel.empty()) throw UsageError("sweep needs --channel");
  if (config.range.empty()) throw UsageError("sweep needs --range");
  const ChannelModel model = make_channel_model(config.channel, model_options(config));
  const std::vector<double> grid = parse_range(config.range);
  const std::vector<Protocol> protocols = parse_protocols(config.protocols);
  for (Protocol p : protocols) {
    if (p == Protocol::Rfi && model.dim != 2) throw UsageError("the rfi protocol is defined for qubits only");
  }

  SweepResult result{model.name, model.parameter, protocols, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SweepRow row{grid[i], {}};
    try {
      const DensityMatrix rho = model.joint_state(grid[i]);
      for (Protocol p : protocols) row.reports.push_back(evaluate(p, rho));
    } catch (const Error& e) {
      const std::string context = "row " + std::to_string(i + 1) + " (" + model.parameter + "=" +
                                  format_double(grid[i]) + "): " + e.what();
      if (e.code() == ErrorCode::Domain) throw UsageError(context);
      throw NumericalFailure(context);
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

json cmd_tomography(const CommandConfig& config) {
  if (config.input.empty()) throw UsageError("tomography needs --input");
  std::optional<TableConvention> convention;
  if (!config.convention.empty()) {
    try {
      convention = parse_convention(config.convention);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  const TableReadResult read = read_probability_table(config.input, convention);
  const JointProbabilityTable& table = read.table;

  SolveOptions options;
  options.exact_input = false;
  options.residual_threshold = kNoisyResidualThreshold;
  try {
    const ProcessMatrix chi = solve_process_matrix(table, options);
    const DensityMatrix rho = process_to_joint_state(chi);
    const KeyRateReport qst = qst_rate(rho);
    const KeyRateReport dp =
        dplus1_rate(error_vectors(table), classical_mutual_information(key_basis_distribution(table)));

    json report;
    report["input"] = config.input;
    report["dim"] = table.dim();
    report["convention"] = std::string(to_string(read.convention));
    report["block_correction"] = read.correction;
    report["equations"] = chi.equations;
    report["rank"] = chi.rank;
    report["residual"] = chi.residual;
    report["warning"] = chi.warning || chi.clipped_weight > kNoisyResidualThreshold || qst.warning || dp.warning;
    report["clipped_weight"] = chi.clipped_weight;
    report["trace_preservation_error"] = chi.trace_preservation_error;
    report["rates"] = json{{"qst", report_json(qst)}, {"dplus1", report_json(dp)}};
    report["process_matrix"] = matrix_json(chi.chi);
    report["joint_state"] = matrix_json(rho.matrix());
    return report;
  } catch (const Error& e) {
    throw NumericalFailure(config.input + ": " + e.what());
  }
}

JointProbabilityTable cmd_fixture(const CommandConfig& config) {
  if (config.channel.empty()) throw UsageError("fixture needs --channel");
  if (config.noise < 0.0) throw UsageError("--noise must be nonnegative");
  const ChannelModel model = make_channel_model(config.channel, model_options(config));
  const JointProbabilityTable exact = predict_probabilities(model.joint_state(model.default_value));
  return perturb_table(exact, config.noise, config.seed);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CommandConfig cfg;
  CLI::App app{"Key rates and MUB process tomography for qubit and qudit QKD channels", "tqkd"};
  app.require_subcommand(1);

  std::string names;
  for (const auto& n : channel_names()) names += (names.empty() ? "" : ", ") + n;
  const std::string channel_help = "channel spec name[:value][:key=value]... (" + names + ")";

  auto* sweep = app.add_subcommand("sweep", "evaluate key rates over a parameter grid, CSV output");
  sweep->add_option("--channel", cfg.channel, channel_help)->required();
  sweep->add_option("--dim", cfg.dim, "dimension for depolarizing/identity");
  sweep->add_option("--protocols", cfg.protocols, "comma list of qst, rfi, dplus1")->capture_default_str();
  sweep->add_option("--range", cfg.range, "start:stop:count, inclusive")->required();
  sweep->add_option("--seed", cfg.seed, "seed for Monte Carlo channels");
  sweep->add_option("--samples", cfg.samples, "Monte Carlo samples (drift)");
  sweep->add_option("--out", cfg.out, "output CSV path (stdout if omitted)");

  auto* tomo = app.add_subcommand("tomography", "reconstruct a channel from a probability table, JSON report");
  tomo->add_option("--input", cfg.input, "probability table file")->required();
  tomo->add_option("--convention", cfg.convention, "block-normalized-joint or row-conditional");
  tomo->add_option("--out", cfg.out, "output JSON path (stdout if omitted)");

  auto* fixture = app.add_subcommand("fixture", "write a predicted (optionally noisy) probability table");
  fixture->add_option("--channel", cfg.channel, channel_help)->required();
  fixture->add_option("--dim", cfg.dim, "dimension for depolarizing/identity");
  fixture->add_option("--noise", cfg.noise, "multiplicative noise level sigma");
  fixture->add_option("--seed", cfg.seed, "noise seed");
  fixture->add_option("--samples", cfg.samples, "Monte Carlo samples (drift)");
  fixture->add_option("--out", cfg.out, "output table path")->required();

  auto* verify = app.add_subcommand("verify", "run a property suite; exit 1 on any violation");
  verify->add_option("suite", cfg.suite, "inequalities, mub, roundtrip, closed-forms or table")->required();
  verify->add_option("--input", cfg.input, "probability table (table suite)");
  verify->add_option("--convention", cfg.convention, "table convention override (table suite)");
  verify->add_option("--seed", cfg.seed, "base seed")->default_val(42);
  verify->add_option("--samples", cfg.samples, "number of random channels");
  verify->add_option("--out", cfg.out, "output JSON path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (sweep->parsed()) {
      emit(format_sweep(cmd_sweep(cfg)), cfg.out, out);
    } else if (tomo->parsed()) {
      emit(cmd_tomography(cfg).dump(2) + "\n", cfg.out, out);
    } else if (fixture->parsed()) {
      write_probability_table(cmd_fixture(cfg), cfg.out);
    } else if (verify->parsed()) {
      VerifyOptions opt;
      opt.seed = cfg.seed;
      opt.samples = static_cast<int>(cfg.samples);
      opt.input = cfg.input;
      opt.convention = cfg.convention;
      const VerifyReport report = run_verify(cfg.suite, opt);
      emit(verify_json(report).dump(2) + "\n", cfg.out, out);
      for (const auto& v : report.violations) err << "violation: " << v.check << " (" << v.detail << ")\n";
      return report.passed() ? kSuccess : kVerificationFailure;
    }
    return kSuccess;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_usage(e.code()) ? kUsageError : kNumericalFailure;
  }
}

}  // namespace tqkd::cli
