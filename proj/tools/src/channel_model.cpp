#include "tqkd_cli/channel_model.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "tqkd/channels.hpp"
#include "tqkd/errors.hpp"
#include "tqkd/tomography.hpp"

namespace tqkd::cli {

namespace {

double to_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw UsageError("invalid number '" + std::string(text) + "' in " + std::string(what));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

ChannelModel base_model(std::string_view name, const ModelOptions& opt) {
  constexpr double pi = std::numbers::pi;
  ChannelModel m;
  m.name = std::string(name);

  if (name == "identity") {
    m.parameter = "none";
    m.dim = opt.dim > 0 ? opt.dim : 2;
    require_prime(m.dim);
    const int d = m.dim;
    m.joint_state = [d](double) { return DensityMatrix::from_pure(bell_state(0, 0, d)); };
  } else if (name == "ad-qubit") {
    m.parameter = "p";
    m.joint_state = [](double p) { return affine_to_joint_state(amplitude_damping_qubit(p)); };
  } else if (name == "ad-qutrit") {
    m.parameter = "alpha";
    m.dim = 3;
    m.joint_state = [](double a) { return kraus_to_joint_state(amplitude_damping_qutrit(a)); };
  } else if (name == "depolarizing") {
    m.parameter = "q";
    m.dim = opt.dim > 0 ? opt.dim : 2;
    require_prime(m.dim);
    const int d = m.dim;
    m.joint_state = [d](double q) { return kraus_to_joint_state(depolarizing(d, q)); };
  } else if (name == "rotation") {
    m.parameter = "ax";
    m.fixed = {{"ay", 0.0}, {"az", 0.0}};
  } else if (name == "prob-rotation") {
    m.parameter = "alpha";
    m.joint_state = [](double a) { return affine_to_joint_state(probabilistic_rotation(a)); };
  } else if (name == "pdl") {
    m.parameter = "eta0";
    m.default_value = 1.0;
    m.fixed = {{"eta1", 1.0}};
  } else if (name == "pmd") {
    m.parameter = "beta";
    m.fixed = {{"R", 1.0}, {"tau_a", 0.0}, {"tau_b", 1.0}};
  } else if (name == "drift") {
    m.parameter = "sigma";
    m.default_value = pi / 12;
    m.fixed = {{"a", pi / 6}, {"b", pi / 6}, {"g", pi / 6}};
  } else {
    throw UsageError("unknown channel '" + std::string(name) + "'");
  }
  return m;
}

// Channels whose closures read fixed parameters are bound after overrides are applied.
void bind(ChannelModel& m, const ModelOptions& opt) {
  const auto f = m.fixed;
  if (m.name == "rotation") {
    m.joint_state = [f](double ax) { return affine_to_joint_state(rotation(f.at("ay"), ax, f.at("az"))); };
  } else if (m.name == "pdl") {
    m.joint_state = [f](double eta0) { return pdl_state(eta0, f.at("eta1")); };
  } else if (m.name == "pmd") {
    m.joint_state = [f](double beta) {
      PmdConfig cfg;
      cfg.beta = beta;
      cfg.r_overlap = f.at("R");
      cfg.tau_a = f.at("tau_a");
      cfg.tau_b = f.at("tau_b");
      return pmd_state(cfg);
    };
  } else if (m.name == "drift") {
    const auto samples = opt.samples;
    const auto seed = opt.seed;
    m.joint_state = [f, samples, seed](double sigma) {
      DriftConfig cfg;
      cfg.alpha = f.at("a");
      cfg.beta = f.at("b");
      cfg.gamma = f.at("g");
      cfg.sigma = sigma;
      cfg.samples = samples;
      cfg.seed = seed;
      return affine_to_joint_state(averaged_drift_channel(cfg));
    };
  }
}

}  // namespace

std::vector<std::string> channel_names() {
  return {"identity", "ad-qubit", "ad-qutrit", "depolarizing", "rotation", "prob-rotation", "pdl", "pmd", "drift"};
}

ChannelModel make_channel_model(std::string_view spec, const ModelOptions& options) {
  const auto parts = split(spec, ':');
  ChannelModel m = base_model(parts[0], options);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string_view part = parts[i];
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) {
      m.default_value = to_double(part, "channel spec");
      continue;
    }
    const std::string key(part.substr(0, eq));
    const double value = to_double(part.substr(eq + 1), "channel spec");
    if (key == m.parameter) {
      m.default_value = value;
    } else if (m.fixed.count(key)) {
      m.fixed[key] = value;
    } else {
      throw UsageError("channel '" + m.name + "' has no parameter '" + key + "'");
    }
  }
  bind(m, options);
  return m;
}

std::vector<double> parse_range(std::string_view text, bool allow_single) {
  const auto parts = split(text, ':');
  if (allow_single && parts.size() == 1) return {to_double(parts[0], "--range")};
  if (parts.size() != 3) throw UsageError("--range must be start:stop:count");
  const double start = to_double(parts[0], "--range");
  const double stop = to_double(parts[1], "--range");
  const double count_d = to_double(parts[2], "--range");
  const auto count = static_cast<long long>(count_d);
  if (count != count_d || count < 2) throw UsageError("--range count must be an integer >= 2");
  if (!(stop > start)) throw UsageError("--range stop must exceed start");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    out.push_back(i == count - 1 ? stop : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

std::vector<Protocol> parse_protocols(std::string_view text) {
  std::vector<Protocol> out;
  for (auto name : split(text, ',')) {
    try {
      out.push_back(parse_protocol(name));
    } catch (const Error&) {
      throw UsageError("unknown protocol '" + std::string(name) + "'");
    }
  }
  return out;
}

KeyRateReport evaluate(Protocol protocol, const DensityMatrix& rho_ab) {
  switch (protocol) {
    case Protocol::Qst:
      return qst_rate(rho_ab);
    case Protocol::Rfi:
      if (rho_ab.dim() != 4) throw UsageError("the rfi protocol is defined for qubits only");
      return rfi_rate(rho_ab);
    case Protocol::DPlus1: {
      const JointProbabilityTable table = predict_probabilities(rho_ab);
      return dplus1_rate(error_vectors(table), classical_mutual_information(key_basis_distribution(table)));
    }
  }
  throw UsageError("unsupported protocol");
}

}  // namespace tqkd::cli
