#pragma once

// Asymptotic one-way key rates r = I(A:B) − χ(A:E) for the tomography-based,
// reference-frame-independent and (d+1)-basis protocols.

#include <optional>
#include <string>
#include <string_view>

#include "tqkd/qmath.hpp"
#include "tqkd/tomography.hpp"

namespace tqkd {

enum class Protocol { Qst, Rfi, DPlus1 };

std::string_view to_string(Protocol p) noexcept;
/// Accepts "qst", "rfi", "dplus1"; throws Parse otherwise.
Protocol parse_protocol(std::string_view name);

struct KeyRateReport {
  Protocol protocol = Protocol::Qst;
  double mutual_information = 0.0;
  double holevo = 0.0;
  double raw_rate = 0.0;
  double clipped_rate = 0.0;
  bool warning = false;
  std::string note;
};

KeyRateReport make_report(Protocol p, double mutual_information, double holevo);

/// Classical mutual information of a joint distribution given as a matrix p(a, b).
double classical_mutual_information(const RealMatrix& joint);

struct MutualInformation {
  double value;
  bool nonuniform_alice;  // Alice's key marginal deviates from 1/d by more than 1e-6
};

/// Classical I(A:B) of the computational-basis outcomes δ_ij = ⟨ij|ρ|ij⟩.
MutualInformation mutual_information_qudit(const DensityMatrix& rho_ab);

/// χ = S(ρ_AB) − Σ_i p_i S(ρ_B|i), with p_i the weight of Alice's key outcome i.
double holevo_qudit(const DensityMatrix& rho_ab);

KeyRateReport qst_rate(const DensityMatrix& rho_ab);

/// Expanded qubit expression in terms of the affine parameters. Only valid for
/// trace-preserving qubit channels acting on Bob's half of |Φ00⟩.
double qst_rate_affine(const AffineQubitChannel& ch);

struct RfiObservables {
  double q;  // key-basis error rate (1 − ⟨ZZ⟩)/2
  double c;  // ⟨XX⟩² + ⟨XY⟩² + ⟨YX⟩² + ⟨YY⟩²
};

RfiObservables rfi_observables(const DensityMatrix& rho_ab);

/// Keeps the Bell diagonal and the imaginary parts of the (Φ−,Φ+) and (Ψ−,Ψ+) coherences.
DensityMatrix rfi_state(const DensityMatrix& rho_ab);

KeyRateReport rfi_rate(const DensityMatrix& rho_ab);

struct BellSpectrum {
  ProbabilityVector lambda;  // index j*d + k
  bool clipped = false;      // some λ was slightly negative and set to zero
};

/// λ_jk = (1/d)(Σ_s q_1s^(sj − k) + q_01^(j) − 1). Throws InconsistentStatistics
/// if any λ falls below −1e-3.
BellSpectrum bell_lambdas(const ErrorVectors& q);

/// Zeroes every off-diagonal element in the generalized Bell basis.
DensityMatrix bell_diagonal_part(const DensityMatrix& rho_ab);

/// χ = H(λ) − H(q_01). I defaults to log₂d − H(q_01); a measured key-basis value can be supplied instead.
KeyRateReport dplus1_rate(const ErrorVectors& q, std::optional<double> key_mutual_information = std::nullopt);

}  // namespace tqkd
