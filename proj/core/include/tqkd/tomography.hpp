#pragma once

// Channel estimation from measurement statistics: qubit affine reconstruction
// from biases and qudit MUB process tomography.

#include <array>
#include <utility>
#include <vector>

#include "tqkd/channels.hpp"
#include "tqkd/qmath.hpp"

namespace tqkd {

// ---- qubit biases --------------------------------------------------------

enum class Axis { Z = 0, X = 1, Y = 2 };

/// Q[a][b][k]: bias of Bob's b-measurement when Alice prepares eigenstate k of axis a.
/// Q_ab0 = R_ba + t_b and Q_ab1 = R_ba − t_b.
struct BiasTable {
  std::array<std::array<std::array<double, 2>, 3>, 3> q{};

  double& operator()(Axis a, Axis b, int k) { return q[static_cast<int>(a)][static_cast<int>(b)][k]; }
  double operator()(Axis a, Axis b, int k) const { return q[static_cast<int>(a)][static_cast<int>(b)][k]; }

  /// Throws Domain if any entry leaves [−1, 1].
  void validate() const;
};

BiasTable biases_from_channel(const AffineQubitChannel& ch);
AffineQubitChannel affine_from_biases(const BiasTable& b);

// ---- MUB tomography ------------------------------------------------------

/// Joint outcome probabilities p[(γ,l),(η,s)] over all d+1 bases on each side.
/// Rows are Alice's composite index γ*d + l, columns Bob's η*d + s. Each (γ,η)
/// block is a joint distribution.
class JointProbabilityTable {
 public:
  /// Validates entries ≥ −1e-9 and block sums within `block_tolerance` of 1.
  JointProbabilityTable(int d, RealMatrix p, double block_tolerance = 1e-6);

  int dim() const noexcept { return d_; }
  int size() const noexcept { return static_cast<int>(p_.rows()); }
  const RealMatrix& matrix() const noexcept { return p_; }

  double operator()(int gamma, int l, int eta, int s) const { return p_(gamma * d_ + l, eta * d_ + s); }
  RealMatrix block(int gamma, int eta) const { return p_.block(gamma * d_, eta * d_, d_, d_); }

  /// Largest |block sum − 1|.
  double max_block_deviation() const;

 private:
  int d_;
  RealMatrix p_;
};

/// Outcome statistics of the joint state ρ_AB when both parties measure all MUBs.
/// Alice's outcome l is recorded for the vector conj(ψ_l), so her steered state is 𝒫_l
/// and p = (1/d) Tr[ℰ(𝒫_l^(γ)) 𝒫_s^(η)].
JointProbabilityTable predict_probabilities(const DensityMatrix& rho_ab);
JointProbabilityTable predict_probabilities(const KrausChannel& ch);

struct SolveOptions {
  /// Input is noiseless: a residual above 1e-4 is an error instead of a warning.
  bool exact_input = true;
  double residual_threshold = 1e-6;
};

/// χ over the d(d+1) MUB projectors: ℰ(ρ) = Σ χ_mn 𝒫_m ρ 𝒫_n.
struct ProcessMatrix {
  int dim = 0;
  ComplexMatrix chi;
  double residual = 0.0;       // ‖A x − b‖₂ of the least-squares solve
  bool warning = false;        // residual above the configured threshold
  int equations = 0;           // d²(d+1)² rows in the system
  int rank = 0;                // numerical rank of the system
  double clipped_weight = 0.0; // negative spectrum removed from the induced joint state
  double trace_preservation_error = 0.0;
};

ProcessMatrix solve_process_matrix(const JointProbabilityTable& table, const SolveOptions& options = {});

/// Σ χ_mn 𝒫_m M 𝒫_n.
ComplexMatrix apply_process(const ProcessMatrix& chi, const ComplexMatrix& m);

/// (id ⊗ ℰ_χ)(|Φ00⟩⟨Φ00|), normalized. Throws ReconstructionFailure on eigenvalues below −1e-6.
DensityMatrix process_to_joint_state(const ProcessMatrix& chi);

/// Matched-basis error statistics for every Weyl label (0,1), (1,0), …, (1,d−1).
class ErrorVectors {
 public:
  ErrorVectors(int d, std::vector<ProbabilityVector> by_family);

  int dim() const noexcept { return d_; }
  /// Family 0 carries label (0,1), family k+1 carries (1,k).
  const ProbabilityVector& family(int gamma) const { return q_.at(static_cast<std::size_t>(gamma)); }
  const ProbabilityVector& at(int j, int k) const;

 private:
  int d_;
  std::vector<ProbabilityVector> q_;
};

/// q^(t) = Σ_{b − a ≡ t} p(a, b | matched family), renormalized per block.
ErrorVectors error_vectors(const JointProbabilityTable& table);

/// The (0,0) block normalized to a joint distribution of key symbols.
RealMatrix key_basis_distribution(const JointProbabilityTable& table);

}  // namespace tqkd
