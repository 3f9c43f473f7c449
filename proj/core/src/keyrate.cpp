#include "tqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tqkd/errors.hpp"

namespace tqkd {

namespace {

double entropy_of(const RealVector& p) {
  return shannon_entropy(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

ComplexMatrix pauli(char which) {
  ComplexMatrix m(2, 2);
  switch (which) {
    case 'x':
      m << 0, 1, 1, 0;
      break;
    case 'y':
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    default:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

double expectation(const DensityMatrix& rho, char a, char b) {
  return (rho.matrix() * kron(pauli(a), pauli(b))).trace().real();
}

void require_qubit_pair(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw Error(ErrorCode::Domain, "RFI quantities need a two-qubit state");
}

}  // namespace

std::string_view to_string(Protocol p) noexcept {
  switch (p) {
    case Protocol::Qst:
      return "qst";
    case Protocol::Rfi:
      return "rfi";
    case Protocol::DPlus1:
      return "dplus1";
  }
  return "unknown";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "qst") return Protocol::Qst;
  if (name == "rfi") return Protocol::Rfi;
  if (name == "dplus1") return Protocol::DPlus1;
  throw Error(ErrorCode::Parse, "unknown protocol '" + std::string(name) + "'");
}

KeyRateReport make_report(Protocol p, double mutual_information, double holevo) {
  KeyRateReport r;
  r.protocol = p;
  r.mutual_information = mutual_information;
  r.holevo = holevo;
  r.raw_rate = mutual_information - holevo;
  r.clipped_rate = std::max(0.0, r.raw_rate);
  return r;
}

double classical_mutual_information(const RealMatrix& joint) {
  const RealMatrix p = joint.cwiseMax(0.0) / joint.cwiseMax(0.0).sum();
  const RealVector pa = p.rowwise().sum();
  const RealVector pb = p.colwise().sum().transpose();
  const RealVector flat = p.reshaped();
  return entropy_of(pa) + entropy_of(pb) - entropy_of(flat);
}

MutualInformation mutual_information_qudit(const DensityMatrix& rho_ab) {
  const int d = local_dimension(rho_ab);
  RealMatrix delta(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) delta(i, j) = rho_ab(i * d + j, i * d + j).real();
  }
  const RealVector alice = delta.cwiseMax(0.0).rowwise().sum() / delta.cwiseMax(0.0).sum();
  const double uniform = 1.0 / d;
  const bool nonuniform = (alice.array() - uniform).abs().maxCoeff() > 1e-6;
  return {classical_mutual_information(delta), nonuniform};
}

double holevo_qudit(const DensityMatrix& rho_ab) {
  const int d = local_dimension(rho_ab);
  double chi = von_neumann_entropy(rho_ab);
  for (int i = 0; i < d; ++i) {
    const double p = alice_block(rho_ab, i).trace().real();
    if (p < 1e-12) continue;
    chi -= p * von_neumann_entropy(conditional_bob_state(rho_ab, i).state);
  }
  return chi;
}

KeyRateReport qst_rate(const DensityMatrix& rho_ab) {
  const MutualInformation mi = mutual_information_qudit(rho_ab);
  KeyRateReport r = make_report(Protocol::Qst, mi.value, holevo_qudit(rho_ab));
  if (mi.nonuniform_alice) {
    r.warning = true;
    r.note = "non-uniform key marginal on Alice's side";
  }
  return r;
}

double qst_rate_affine(const AffineQubitChannel& ch) {
  const DensityMatrix rho = affine_to_joint_state(ch);
  double sum_dlogd = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double delta = std::max(0.0, rho(i, i).real());
    if (delta > 0.0) sum_dlogd += delta * std::log2(delta);
  }
  const Eigen::Vector3d image = ch.R.col(0);
  const double up = std::min(1.0, (image + ch.t).norm());
  const double down = std::min(1.0, (image - ch.t).norm());
  return 1.0 - von_neumann_entropy(rho) + sum_dlogd + binary_entropy((1.0 + ch.t(0)) / 2.0) +
         0.5 * binary_entropy((1.0 + up) / 2.0) + 0.5 * binary_entropy((1.0 + down) / 2.0);
}

RfiObservables rfi_observables(const DensityMatrix& rho_ab) {
  require_qubit_pair(rho_ab);
  const double xx = expectation(rho_ab, 'x', 'x');
  const double xy = expectation(rho_ab, 'x', 'y');
  const double yx = expectation(rho_ab, 'y', 'x');
  const double yy = expectation(rho_ab, 'y', 'y');
  return {(1.0 - expectation(rho_ab, 'z', 'z')) / 2.0, xx * xx + xy * xy + yx * yx + yy * yy};
}

DensityMatrix rfi_state(const DensityMatrix& rho_ab) {
  require_qubit_pair(rho_ab);
  const ComplexMatrix bell = bell_basis(2);
  const ComplexMatrix m = bell.adjoint() * rho_ab.matrix() * bell;
  ComplexMatrix kept = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) kept(i, i) = m(i, i).real();
  // (Φ−, Φ+) and (Ψ−, Ψ+) pairs
  for (const auto& [r, c] : {std::pair{1, 0}, std::pair{3, 2}}) {
    kept(r, c) = Complex(0.0, m(r, c).imag());
    kept(c, r) = std::conj(kept(r, c));
  }
  return DensityMatrix::normalized(bell * kept * bell.adjoint());
}

KeyRateReport rfi_rate(const DensityMatrix& rho_ab) {
  const DensityMatrix twirled = rfi_state(rho_ab);
  const MutualInformation mi = mutual_information_qudit(twirled);
  KeyRateReport r = make_report(Protocol::Rfi, mi.value, holevo_qudit(twirled));
  if (mi.nonuniform_alice) {
    r.warning = true;
    r.note = "non-uniform key marginal on Alice's side";
  }
  return r;
}

BellSpectrum bell_lambdas(const ErrorVectors& q) {
  const int d = q.dim();
  const ProbabilityVector& q01 = q.at(0, 1);
  std::vector<double> lambda(static_cast<std::size_t>(d) * d);
  double worst = 0.0;
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      double acc = q01[static_cast<std::size_t>(j)] - 1.0;
      for (int s = 0; s < d; ++s) {
        const int t = ((s * j - k) % d + d) % d;
        acc += q.at(1, s)[static_cast<std::size_t>(t)];
      }
      const double value = acc / d;
      worst = std::min(worst, value);
      lambda[static_cast<std::size_t>(j * d + k)] = value;
    }
  }
  if (worst < -1e-3) {
    throw Error(ErrorCode::InconsistentStatistics, "Bell eigenvalue " + std::to_string(worst) + " below -1e-3");
  }
  BellSpectrum out;
  out.clipped = worst < -tol::kDistribution;
  double total = 0.0;
  for (double& v : lambda) {
    v = std::max(0.0, v);
    total += v;
  }
  for (double& v : lambda) v /= total;
  out.lambda = ProbabilityVector(std::move(lambda));
  return out;
}

DensityMatrix bell_diagonal_part(const DensityMatrix& rho_ab) {
  const int d = local_dimension(rho_ab);
  const ComplexMatrix bell = bell_basis(d);
  const ComplexMatrix m = bell.adjoint() * rho_ab.matrix() * bell;
  const ComplexVector diag = m.diagonal().real().cast<Complex>();
  return DensityMatrix::normalized(bell * diag.asDiagonal() * bell.adjoint());
}

KeyRateReport dplus1_rate(const ErrorVectors& q, std::optional<double> key_mutual_information) {
  const BellSpectrum spectrum = bell_lambdas(q);
  const double h_key = shannon_entropy(q.at(0, 1));
  const double holevo = shannon_entropy(spectrum.lambda) - h_key;
  const double mi = key_mutual_information.value_or(std::log2(static_cast<double>(q.dim())) - h_key);
  KeyRateReport r = make_report(Protocol::DPlus1, mi, holevo);
  if (spectrum.clipped) {
    r.warning = true;
    r.note = "negative Bell eigenvalues clipped";
  }
  return r;
}

}  // namespace tqkd
