#pragma once

// Dense complex linear algebra and information-theoretic primitives shared by
// every other module: entropies, Weyl operators, generalized Bell states,
// mutually unbiased bases for prime dimensions, conditional states.

#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace tqkd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kEigenvalue = 1e-10;
inline constexpr double kDistribution = 1e-9;
}  // namespace tol

/// Max-entry comparison; the tolerance is always explicit.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tolerance);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_prime(int n) noexcept;

/// Throws UnsupportedDimension unless d is prime.
void require_prime(int d);

/// ω^n with ω = e^{2πi/d}; n is reduced modulo d first so large exponents stay exact.
Complex root_of_unity(long long n, int d);

/// Nonnegative entries summing to one.
class ProbabilityVector {
 public:
  ProbabilityVector() = default;
  explicit ProbabilityVector(std::vector<double> values, double tolerance = tol::kDistribution);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Hermitian, unit-trace, positive semidefinite matrix (all within 1e-10).
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  /// Hermitizes and divides by the trace before validating.
  static DensityMatrix normalized(const ComplexMatrix& m);
  static DensityMatrix from_pure(const ComplexVector& psi);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  /// Ascending eigenvalues.
  RealVector eigenvalues() const;

 private:
  ComplexMatrix m_;
};

/// Result of clipping the spectrum of a Hermitian matrix at zero.
struct PsdProjection {
  DensityMatrix state;
  double clipped_weight;  // sum of |negative eigenvalues| removed, before renormalization
};

/// Hermitizes, clips negative eigenvalues to zero and renormalizes the trace.
PsdProjection project_to_density_matrix(const ComplexMatrix& m);

double shannon_entropy(std::span<const double> p);
double shannon_entropy(const ProbabilityVector& p);
double binary_entropy(double x);

/// Spectrum entropy in bits; eigenvalues in [-1e-10, 0) count as zero.
double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy_of_spectrum(std::span<const double> eigenvalues);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// U_jk = Σ_s ω^{sk} |s+j⟩⟨s|.
ComplexMatrix weyl_operator(int j, int k, int d);

/// |Φ_jk⟩ = (I ⊗ U_jk)|Φ_00⟩ = d^{-1/2} Σ_s ω^{sk} |s, s+j⟩.
ComplexVector bell_state(int j, int k, int d);

/// Columns are |Φ_jk⟩ in the order j*d + k. For d = 2 that is Φ+, Φ−, Ψ+, Ψ−.
ComplexMatrix bell_basis(int d);

/// The d+1 mutually unbiased bases of a prime dimension.
///
/// Family 0 is the computational basis (eigenbasis of U_01, the key basis) and
/// family k+1 is the eigenbasis of U_1k. Within every family the vector labelled
/// m has Weyl eigenvalue ω^{m + c_γ} for a family constant c_γ, so a Weyl error
/// acting on Bob's half shifts outcome labels uniformly.
class MubFamily {
 public:
  MubFamily(int d, std::vector<ComplexMatrix> bases);

  int dim() const noexcept { return d_; }
  int num_families() const noexcept { return d_ + 1; }
  /// Total number of projectors, d(d+1).
  int num_projectors() const noexcept { return d_ * (d_ + 1); }

  /// Columns are the basis vectors of family gamma.
  const ComplexMatrix& basis(int gamma) const { return bases_.at(static_cast<std::size_t>(gamma)); }
  ComplexVector vector(int gamma, int m) const;
  ComplexMatrix projector(int gamma, int m) const;

  /// Composite index gamma*d + m.
  ComplexVector vector(int index) const { return vector(index / d_, index % d_); }

  /// Weyl label (j, k) of the operator diagonalized by family gamma.
  std::pair<int, int> weyl_label(int gamma) const;

 private:
  int d_;
  std::vector<ComplexMatrix> bases_;
};

MubFamily mub_family(int d);

/// Local dimension d of a joint state of dimension d².
int local_dimension(const DensityMatrix& rho_ab);

/// Unnormalized block _A⟨i|ρ_AB|i⟩_A.
ComplexMatrix alice_block(const DensityMatrix& rho_ab, int i);

struct ConditionalState {
  DensityMatrix state;  // normalized
  double probability;   // trace of the block
};

ConditionalState conditional_bob_state(const DensityMatrix& rho_ab, int i);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix random_unitary(int d, std::mt19937_64& rng);

}  // namespace tqkd
