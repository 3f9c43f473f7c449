#include "tqkd/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "tqkd/errors.hpp"

namespace tqkd {

namespace {

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tolerance) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return (a - b).cwiseAbs().maxCoeff() <= tolerance;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

bool is_prime(int n) noexcept {
  if (n < 2) return false;
  for (int f = 2; f * f <= n; ++f) {
    if (n % f == 0) return false;
  }
  return true;
}

void require_prime(int d) {
  if (!is_prime(d)) {
    throw Error(ErrorCode::UnsupportedDimension,
                "dimension " + std::to_string(d) + " is not prime");
  }
}

Complex root_of_unity(long long n, int d) {
  const long long r = ((n % d) + d) % d;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / d);
}

ProbabilityVector::ProbabilityVector(std::vector<double> values, double tolerance)
    : values_(std::move(values)) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < -tolerance) {
      throw Error(ErrorCode::InvalidDistribution,
                  "entry " + std::to_string(i) + " is negative: " + std::to_string(values_[i]));
    }
    sum += values_[i];
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw Error(ErrorCode::InvalidDistribution, "entries sum to " + std::to_string(sum));
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw Error(ErrorCode::Domain, "density matrix must be square and non-empty");
  }
  const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol::kHermitian) {
    throw Error(ErrorCode::Domain, "matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    std::ostringstream os;
    os << "trace is " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag() << "i";
    throw Error(ErrorCode::Domain, os.str());
  }
  const double min_eig = hermitian_eigenvalues(hermitize(m_)).minCoeff();
  if (min_eig < -tol::kEigenvalue) {
    throw Error(ErrorCode::NotPositiveSemidefinite,
                "minimum eigenvalue " + std::to_string(min_eig));
  }
}

DensityMatrix DensityMatrix::normalized(const ComplexMatrix& m) {
  ComplexMatrix h = hermitize(m);
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw Error(ErrorCode::Domain, "matrix has non-positive trace");
  return DensityMatrix(h / tr);
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& psi) {
  const double n = psi.squaredNorm();
  if (!(n > 0.0)) throw Error(ErrorCode::Domain, "zero state vector");
  return DensityMatrix::normalized(psi * psi.adjoint() / n);
}

RealVector DensityMatrix::eigenvalues() const { return hermitian_eigenvalues(hermitize(m_)); }

PsdProjection project_to_density_matrix(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m));
  RealVector ev = solver.eigenvalues();
  double clipped = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < 0.0) {
      clipped -= ev(i);
      ev(i) = 0.0;
    }
  }
  const double total = ev.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::Domain, "matrix has no positive spectral weight");
  const ComplexMatrix& vecs = solver.eigenvectors();
  ComplexMatrix out = vecs * (ev / total).cast<Complex>().asDiagonal() * vecs.adjoint();
  return {DensityMatrix(hermitize(out)), clipped};
}

double shannon_entropy(std::span<const double> p) {
  double sum = 0.0;
  for (double x : p) {
    if (x < -1e-9) {
      throw Error(ErrorCode::InvalidDistribution, "negative probability " + std::to_string(x));
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorCode::InvalidDistribution, "probabilities sum to " + std::to_string(sum));
  }
  double h = 0.0;
  for (double x : p) h -= xlog2x(x);
  return h;
}

double shannon_entropy(const ProbabilityVector& p) { return shannon_entropy(p.values()); }

double binary_entropy(double x) {
  if (x < -1e-12 || x > 1.0 + 1e-12) {
    throw Error(ErrorCode::Domain, "binary entropy argument " + std::to_string(x) + " outside [0,1]");
  }
  x = std::clamp(x, 0.0, 1.0);
  return -xlog2x(x) - xlog2x(1.0 - x);
}

double von_neumann_entropy_of_spectrum(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double lambda : eigenvalues) {
    if (lambda < -tol::kEigenvalue) {
      throw Error(ErrorCode::NotPositiveSemidefinite, "eigenvalue " + std::to_string(lambda));
    }
    s -= xlog2x(lambda);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector ev = rho.eigenvalues();
  return von_neumann_entropy_of_spectrum(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::Domain, "trace distance of mismatched dimensions");
  return 0.5 * hermitian_eigenvalues(hermitize(a.matrix() - b.matrix())).cwiseAbs().sum();
}

ComplexMatrix weyl_operator(int j, int k, int d) {
  require_prime(d);
  if (j < 0 || j >= d || k < 0 || k >= d) {
    throw Error(ErrorCode::Domain, "Weyl indices must lie in [0, d)");
  }
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (int s = 0; s < d; ++s) u((s + j) % d, s) = root_of_unity(static_cast<long long>(s) * k, d);
  return u;
}

ComplexVector bell_state(int j, int k, int d) {
  require_prime(d);
  if (j < 0 || j >= d || k < 0 || k >= d) {
    throw Error(ErrorCode::Domain, "Bell indices must lie in [0, d)");
  }
  ComplexVector v = ComplexVector::Zero(d * d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int s = 0; s < d; ++s) {
    v(s * d + (s + j) % d) = norm * root_of_unity(static_cast<long long>(s) * k, d);
  }
  return v;
}

ComplexMatrix bell_basis(int d) {
  require_prime(d);
  ComplexMatrix b(d * d, d * d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) b.col(j * d + k) = bell_state(j, k, d);
  }
  return b;
}

MubFamily::MubFamily(int d, std::vector<ComplexMatrix> bases) : d_(d), bases_(std::move(bases)) {
  if (static_cast<int>(bases_.size()) != d + 1) {
    throw Error(ErrorCode::Domain, "a complete MUB family has d+1 bases");
  }
}

ComplexVector MubFamily::vector(int gamma, int m) const { return basis(gamma).col(m); }

ComplexMatrix MubFamily::projector(int gamma, int m) const {
  const ComplexVector v = vector(gamma, m);
  return v * v.adjoint();
}

std::pair<int, int> MubFamily::weyl_label(int gamma) const {
  if (gamma < 0 || gamma > d_) throw Error(ErrorCode::Domain, "family index out of range");
  return gamma == 0 ? std::pair{0, 1} : std::pair{1, gamma - 1};
}

MubFamily mub_family(int d) {
  require_prime(d);
  std::vector<ComplexMatrix> bases;
  bases.reserve(static_cast<std::size_t>(d) + 1);
  bases.push_back(ComplexMatrix::Identity(d, d));

  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  if (d == 2) {
    const Complex i{0.0, 1.0};
    ComplexMatrix x(2, 2);
    x << norm, norm, norm, -norm;
    ComplexMatrix y(2, 2);
    // U_11 = [[0,-1],[1,0]]: (1,-i) has eigenvalue i, (1,i) has eigenvalue -i = i·ω.
    y << norm, norm, -i * norm, i * norm;
    bases.push_back(x);
    bases.push_back(y);
    return MubFamily(d, std::move(bases));
  }

  // 2^{-1} mod d, so that ω^{2^{-1} k s² − m s} diagonalizes U_1k.
  const long long half = (d + 1) / 2;
  for (int k = 0; k < d; ++k) {
    ComplexMatrix b(d, d);
    for (int m = 0; m < d; ++m) {
      for (int s = 0; s < d; ++s) {
        const long long e = half * k % d * s % d * s - static_cast<long long>(m) * s;
        b(s, m) = norm * root_of_unity(e, d);
      }
    }
    bases.push_back(std::move(b));
  }
  return MubFamily(d, std::move(bases));
}

int local_dimension(const DensityMatrix& rho_ab) {
  const int n = rho_ab.dim();
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) {
    throw Error(ErrorCode::Domain, "joint state dimension " + std::to_string(n) + " is not a square");
  }
  return d;
}

ComplexMatrix alice_block(const DensityMatrix& rho_ab, int i) {
  const int d = local_dimension(rho_ab);
  if (i < 0 || i >= d) throw Error(ErrorCode::Domain, "Alice outcome out of range");
  return rho_ab.matrix().block(i * d, i * d, d, d);
}

ConditionalState conditional_bob_state(const DensityMatrix& rho_ab, int i) {
  const ComplexMatrix block = alice_block(rho_ab, i);
  const double p = block.trace().real();
  if (p < 1e-12) {
    throw Error(ErrorCode::ZeroProbabilityOutcome,
                "Alice outcome " + std::to_string(i) + " has probability " + std::to_string(p));
  }
  return {DensityMatrix::normalized(block), p};
}

ComplexMatrix random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) g(r, c) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < d; ++c) {
    const Complex diag = r(c, c);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(c) *= diag / mag;
  }
  return q;
}

}  // namespace tqkd
