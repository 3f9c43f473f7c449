#include "tqkd/channels.hpp"

#include <cmath>
#include <string>

#include "tqkd/errors.hpp"

namespace tqkd {

namespace {

const Complex kI{0.0, 1.0};

// Pauli matrices in the (z, x, y) Bloch order.
const std::array<ComplexMatrix, 3>& paulis() {
  static const std::array<ComplexMatrix, 3> p = [] {
    ComplexMatrix z(2, 2), x(2, 2), y(2, 2);
    z << 1, 0, 0, -1;
    x << 0, 1, 1, 0;
    y << 0, -kI, kI, 0;
    return std::array<ComplexMatrix, 3>{z, x, y};
  }();
  return p;
}

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::Domain, std::string(name) + " = " + std::to_string(v) + " outside [0, 1]");
  }
}

// (id ⊗ ℰ)(|Φ00⟩⟨Φ00|) = (1/d) Σ_ij |i⟩⟨j| ⊗ ℰ(|i⟩⟨j|)
template <typename Map>
ComplexMatrix choi_state(int d, Map&& apply) {
  ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(i, j) = 1.0;
      out.block(i * d, j * d, d, d) = apply(e) / static_cast<double>(d);
    }
  }
  return out;
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators, double tolerance)
    : ops_(std::move(operators)) {
  if (ops_.empty()) throw Error(ErrorCode::InvalidChannel, "no Kraus operators");
  dim_ = static_cast<int>(ops_.front().rows());
  ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& a : ops_) {
    if (a.rows() != dim_ || a.cols() != dim_) {
      throw Error(ErrorCode::InvalidChannel, "Kraus operators must all be d×d");
    }
    sum += a.adjoint() * a;
  }
  const double dev = (sum - ComplexMatrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
  if (dev > tolerance) {
    throw Error(ErrorCode::InvalidChannel, "completeness violated by " + std::to_string(dev));
  }
}

KrausChannel KrausChannel::identity(int d) { return KrausChannel({ComplexMatrix::Identity(d, d)}); }

ComplexMatrix KrausChannel::apply(const ComplexMatrix& m) const {
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& a : ops_) out += a * m * a.adjoint();
  return out;
}

Eigen::Vector3d apply_affine(const AffineQubitChannel& ch, const Eigen::Vector3d& bloch) {
  if (bloch.norm() > 1.0 + 1e-9) {
    throw Error(ErrorCode::Domain, "Bloch vector outside the unit ball");
  }
  return ch.R * bloch + ch.t;
}

ComplexMatrix apply_affine_operator(const AffineQubitChannel& ch, const ComplexMatrix& m) {
  const auto& s = paulis();
  const Complex a = 0.5 * m.trace();
  Eigen::Vector3cd c;
  for (int b = 0; b < 3; ++b) c(b) = 0.5 * (m * s[b]).trace();
  const Eigen::Vector3cd out = a * ch.t.cast<Complex>() + ch.R.cast<Complex>() * c;
  ComplexMatrix r = a * ComplexMatrix::Identity(2, 2);
  for (int b = 0; b < 3; ++b) r += out(b) * s[b];
  return r;
}

DensityMatrix affine_to_joint_state(const AffineQubitChannel& ch) {
  const ComplexMatrix m = choi_state(2, [&](const ComplexMatrix& e) { return apply_affine_operator(ch, e); });
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -1e-9) {
    throw Error(ErrorCode::NotCompletelyPositive,
                "joint state has eigenvalue " + std::to_string(min_eig));
  }
  return project_to_density_matrix(h).state;
}

DensityMatrix kraus_apply(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim()) throw Error(ErrorCode::Domain, "state and channel dimensions differ");
  return DensityMatrix::normalized(ch.apply(rho.matrix()));
}

DensityMatrix kraus_to_joint_state(const KrausChannel& ch) {
  return DensityMatrix::normalized(choi_state(ch.dim(), [&](const ComplexMatrix& e) { return ch.apply(e); }));
}

AffineQubitChannel kraus_to_affine(const KrausChannel& ch) {
  if (ch.dim() != 2) throw Error(ErrorCode::Domain, "affine representation needs a qubit channel");
  const auto& s = paulis();
  AffineQubitChannel out;
  const ComplexMatrix e_id = ch.apply(ComplexMatrix::Identity(2, 2));
  for (int a = 0; a < 3; ++a) {
    out.t(a) = 0.5 * (s[a] * e_id).trace().real();
    for (int b = 0; b < 3; ++b) out.R(a, b) = 0.5 * (s[a] * ch.apply(s[b])).trace().real();
  }
  return out;
}

KrausChannel mix_channels(const KrausChannel& a, const KrausChannel& b, double lambda) {
  require_unit_interval(lambda, "lambda");
  if (a.dim() != b.dim()) throw Error(ErrorCode::Domain, "mixed channels must share a dimension");
  std::vector<ComplexMatrix> ops;
  for (const auto& op : a.operators()) ops.push_back(std::sqrt(lambda) * op);
  for (const auto& op : b.operators()) ops.push_back(std::sqrt(1.0 - lambda) * op);
  return KrausChannel(std::move(ops));
}

KrausChannel random_kraus_channel(int d, int num_operators, std::mt19937_64& rng) {
  if (d < 1 || num_operators < 1) throw Error(ErrorCode::Domain, "random channel needs d, n >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  const int rows = d * num_operators;
  ComplexMatrix g(rows, d);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < d; ++c) g(r, c) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix iso = qr.householderQ() * ComplexMatrix::Identity(rows, d);
  std::vector<ComplexMatrix> ops;
  for (int i = 0; i < num_operators; ++i) ops.push_back(iso.block(i * d, 0, d, d));
  return KrausChannel(std::move(ops));
}

AffineQubitChannel amplitude_damping_qubit(double p) {
  require_unit_interval(p, "p");
  AffineQubitChannel ch;
  const double s = std::sqrt(1.0 - p);
  ch.R = Eigen::Vector3d(1.0 - p, s, s).asDiagonal();
  ch.t = Eigen::Vector3d(p, 0.0, 0.0);
  return ch;
}

KrausChannel amplitude_damping_qutrit(double alpha) {
  require_unit_interval(alpha, "alpha");
  ComplexMatrix a0 = ComplexMatrix::Zero(3, 3);
  ComplexMatrix a1 = ComplexMatrix::Zero(3, 3);
  ComplexMatrix a2 = ComplexMatrix::Zero(3, 3);
  a0(0, 0) = 1.0;
  a0(1, 1) = std::sqrt(1.0 - alpha);
  a0(2, 2) = 1.0 - alpha;
  a1(0, 1) = std::sqrt(alpha);
  a1(1, 2) = std::sqrt(2.0 * alpha * (1.0 - alpha));
  a2(0, 2) = alpha;
  return KrausChannel({a0, a1, a2});
}

KrausChannel depolarizing(int d, double q) {
  require_prime(d);
  require_unit_interval(q, "q");
  const double d2 = static_cast<double>(d) * d;
  std::vector<ComplexMatrix> ops;
  ops.push_back(std::sqrt(1.0 - q + q / d2) * ComplexMatrix::Identity(d, d));
  if (q > 0.0) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        if (j == 0 && k == 0) continue;
        ops.push_back(std::sqrt(q / d2) * weyl_operator(j, k, d));
      }
    }
  }
  return KrausChannel(std::move(ops));
}

Eigen::Matrix3d rotation_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix3d m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

Eigen::Matrix3d rotation_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix3d m;
  m << c, 0, -s, 0, 1, 0, s, 0, c;
  return m;
}

Eigen::Matrix3d rotation_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix3d m;
  m << 1, 0, 0, 0, c, -s, 0, s, c;
  return m;
}

AffineQubitChannel rotation(double a_y, double a_x, double a_z) {
  AffineQubitChannel ch;
  ch.R = rotation_y(a_y) * rotation_x(a_x) * rotation_z(a_z);
  return ch;
}

AffineQubitChannel probabilistic_rotation(double alpha) {
  AffineQubitChannel ch;
  ch.R = 0.5 * (rotation_x(alpha) + rotation_y(alpha));
  return ch;
}

DensityMatrix pdl_state(double eta0, double eta1) {
  if (!(eta0 > 0.0 && eta0 <= 1.0) || !(eta1 > 0.0 && eta1 <= 1.0)) {
    throw Error(ErrorCode::Domain, "PDL transmittances must lie in (0, 1]");
  }
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = std::sqrt(eta0);
  psi(3) = std::sqrt(eta1);
  return DensityMatrix::from_pure(psi / std::sqrt(eta0 + eta1));
}

double pmd_autocorrelation(const PmdConfig& cfg, double delay) {
  const double x = delay / cfg.tau_b;
  return std::pow(cfg.r_overlap, x * x);
}

DensityMatrix pmd_state(const PmdConfig& cfg) {
  if (!(cfg.r_overlap >= 0.0 && cfg.r_overlap <= 1.0)) {
    throw Error(ErrorCode::Domain, "autocorrelation overlap must lie in [0, 1]");
  }
  if (!(cfg.tau_b > 0.0)) throw Error(ErrorCode::Domain, "tau_b must be positive");

  const Complex eta1 = cfg.eta1.value_or(std::cos(cfg.beta));
  const Complex eta2 = cfg.eta2.value_or(-std::sin(cfg.beta));
  // η_i = |η_i| exp(−i α̃_i / 2)
  const Complex phase1 = std::polar(1.0, -2.0 * std::arg(eta1));
  const Complex phase2 = std::polar(1.0, -2.0 * std::arg(eta2));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::array<Complex, 4> coeff = {eta1 * inv_sqrt2, eta2 * inv_sqrt2,
                                        -std::conj(eta2) * phase2 * inv_sqrt2,
                                        std::conj(eta1) * phase1 * inv_sqrt2};

  // Alice's principal states coincide with her measurement basis; Bob's are rotated by β.
  ComplexVector s_a(2), s_a_perp(2), s_b(2), s_b_perp(2);
  s_a << 1, 0;
  s_a_perp << 0, 1;
  s_b << std::cos(cfg.beta), std::sin(cfg.beta);
  s_b_perp << -std::sin(cfg.beta), std::cos(cfg.beta);
  auto product = [](const ComplexVector& a, const ComplexVector& b) {
    ComplexVector v(4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) v(2 * i + j) = a(i) * b(j);
    return v;
  };
  const std::array<ComplexVector, 4> branch = {product(s_a, s_b), product(s_a, s_b_perp),
                                               product(s_a_perp, s_b), product(s_a_perp, s_b_perp)};
  const std::array<double, 4> delay = {(cfg.tau_a - cfg.tau_b) / 2, (cfg.tau_a + cfg.tau_b) / 2,
                                       -(cfg.tau_a + cfg.tau_b) / 2, -(cfg.tau_a - cfg.tau_b) / 2};

  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double overlap = pmd_autocorrelation(cfg, delay[i] - delay[j]);
      rho += coeff[i] * std::conj(coeff[j]) * overlap * branch[i] * branch[j].adjoint();
    }
  }
  return project_to_density_matrix(rho).state;
}

double transmittance(double loss_db_per_km, double length_km, double eta_b) {
  if (loss_db_per_km < 0.0 || length_km < 0.0) throw Error(ErrorCode::Domain, "loss and length must be nonnegative");
  require_unit_interval(eta_b, "eta_b");
  return eta_b * std::pow(10.0, -loss_db_per_km * length_km / 10.0);
}

AffineQubitChannel averaged_drift_channel(const DriftConfig& cfg) {
  if (cfg.samples < 1) throw Error(ErrorCode::Domain, "drift average needs at least one sample");
  if (cfg.sigma < 0.0) throw Error(ErrorCode::Domain, "sigma must be nonnegative");
  AffineQubitChannel ch;
  if (cfg.sigma == 0.0) {
    ch.R = rotation(cfg.gamma, cfg.beta, cfg.alpha).R;
    return ch;
  }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, cfg.sigma);
  Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
  for (std::int64_t n = 0; n < cfg.samples; ++n) {
    const double da = noise(rng);
    const double db = noise(rng);
    const double dg = noise(rng);
    sum += rotation_y(cfg.gamma + dg) * rotation_x(cfg.beta + db) * rotation_z(cfg.alpha + da);
  }
  ch.R = sum / static_cast<double>(cfg.samples);
  return ch;
}

}  // namespace tqkd
