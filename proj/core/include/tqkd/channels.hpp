#pragma once

// Channel representations and the channel catalog. Every channel can be turned
// into the joint state ρ_AB = (id ⊗ ℰ)(|Φ00⟩⟨Φ00|) that all key-rate
// formulas consume.

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tqkd/qmath.hpp"

namespace tqkd {

/// Bloch-vector affine map v ↦ R v + t. Coordinates are ordered (z, x, y).
struct AffineQubitChannel {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();

  static AffineQubitChannel identity() { return {}; }
};

/// Completely positive map ρ ↦ Σ A_i ρ A_i†, validated for Σ A_i†A_i = I.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> operators, double tolerance = 1e-9);

  static KrausChannel identity(int d);

  int dim() const noexcept { return dim_; }
  const std::vector<ComplexMatrix>& operators() const noexcept { return ops_; }

  /// ℰ applied to an arbitrary d×d operator (linear extension).
  ComplexMatrix apply(const ComplexMatrix& m) const;

 private:
  int dim_;
  std::vector<ComplexMatrix> ops_;
};

Eigen::Vector3d apply_affine(const AffineQubitChannel& ch, const Eigen::Vector3d& bloch);

/// ℰ applied to an arbitrary 2×2 operator, via ℰ(I) = I + t·σ and ℰ(σ_b) = Σ_a R_ab σ_a.
ComplexMatrix apply_affine_operator(const AffineQubitChannel& ch, const ComplexMatrix& m);

DensityMatrix affine_to_joint_state(const AffineQubitChannel& ch);

DensityMatrix kraus_apply(const KrausChannel& ch, const DensityMatrix& rho);
DensityMatrix kraus_to_joint_state(const KrausChannel& ch);

/// Bloch representation of a qubit Kraus channel: R_ab = ½Tr(σ_a ℰ(σ_b)), t_a = ½Tr(σ_a ℰ(I)).
AffineQubitChannel kraus_to_affine(const KrausChannel& ch);

/// Mixture λ ℰ₁ + (1−λ) ℰ₂ as a Kraus channel.
KrausChannel mix_channels(const KrausChannel& a, const KrausChannel& b, double lambda);

/// Random CPTP map with `num_operators` Kraus operators, from a Haar-ish random isometry.
KrausChannel random_kraus_channel(int d, int num_operators, std::mt19937_64& rng);

// ---- catalog -----------------------------------------------------------

AffineQubitChannel amplitude_damping_qubit(double p);
KrausChannel amplitude_damping_qutrit(double alpha);
/// ℰ(ρ) = (1−q)ρ + q I/d, expanded over Weyl operators.
KrausChannel depolarizing(int d, double q);

/// Bloch rotation R_y(a_y) R_x(a_x) R_z(a_z) using the (z, x, y) coordinate matrices.
AffineQubitChannel rotation(double a_y, double a_x, double a_z);
Eigen::Matrix3d rotation_y(double angle);
Eigen::Matrix3d rotation_x(double angle);
Eigen::Matrix3d rotation_z(double angle);

/// Equal-weight mixture of rotations by alpha about x and about y.
AffineQubitChannel probabilistic_rotation(double alpha);

/// (√η0 |00⟩ + √η1 |11⟩)/√(η0+η1).
DensityMatrix pdl_state(double eta0, double eta1);

struct PmdConfig {
  double beta = 0.0;       // principal-state misalignment (rad)
  double r_overlap = 1.0;  // autocorrelation R(τ_B) in [0, 1]
  double tau_a = 0.0;
  double tau_b = 1.0;
  // Overrides for the principal-state projections; defaults are cos β and −sin β.
  std::optional<std::complex<double>> eta1;
  std::optional<std::complex<double>> eta2;
};

/// Pulse autocorrelation used between temporal branches: Gaussian, R(0) = 1, R(τ_B) = r_overlap.
double pmd_autocorrelation(const PmdConfig& cfg, double delay);

/// Polarization state of the entangled pair after PMD on Bob's arm (time modes traced out).
DensityMatrix pmd_state(const PmdConfig& cfg);

/// η_B 10^{−β_c l / 10}.
double transmittance(double loss_db_per_km, double length_km, double eta_b);

struct DriftConfig {
  double alpha = 0.0;  // mean angle of the z-axis factor
  double beta = 0.0;   // mean angle of the x-axis factor
  double gamma = 0.0;  // mean angle of the y-axis factor
  double sigma = 0.0;  // standard deviation of every angle
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
};

/// Monte Carlo average of R_y(γ+Δγ) R_x(β+Δβ) R_z(α+Δα), Δ ~ N(0, σ²) i.i.d.
AffineQubitChannel averaged_drift_channel(const DriftConfig& cfg);

}  // namespace tqkd
