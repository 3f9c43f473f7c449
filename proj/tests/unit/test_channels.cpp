#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "tqkd/channels.hpp"
#include "tqkd/errors.hpp"

using namespace tqkd;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix phi_plus() { return bell_state(0, 0, 2) * bell_state(0, 0, 2).adjoint(); }

double min_eigenvalue(const DensityMatrix& rho) { return rho.eigenvalues().minCoeff(); }

}  // namespace

TEST(Affine, ApplyExamples) {
  const Eigen::Vector3d v(0.3, -0.2, 0.5);
  EXPECT_TRUE(apply_affine(AffineQubitChannel::identity(), v).isApprox(v));
  EXPECT_TRUE(apply_affine(amplitude_damping_qubit(1.0), Eigen::Vector3d(-1, 0, 0)).isApprox(Eigen::Vector3d(1, 0, 0)));
  const Eigen::Vector3d flipped = apply_affine(rotation(0, kPi, 0), Eigen::Vector3d(0, 0, 1));
  EXPECT_NEAR((flipped - Eigen::Vector3d(0, 0, -1)).norm(), 0.0, 1e-15);
  EXPECT_THROW(apply_affine(AffineQubitChannel::identity(), Eigen::Vector3d(1, 1, 0)), Error);
}

TEST(Affine, OperatorActionMatchesBlochMap) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const AffineQubitChannel ch = kraus_to_affine(random_kraus_channel(2, 3, rng));
    const Eigen::Vector3d v(0.2, -0.5, 0.4);
    const Eigen::Vector3d w = apply_affine(ch, v);
    EXPECT_TRUE(approx_equal(apply_affine_operator(ch, oracle::bloch_state(v(0), v(1), v(2))),
                             oracle::bloch_state(w(0), w(1), w(2)), 1e-12));
  }
}

TEST(Affine, JointStateExamples) {
  EXPECT_TRUE(approx_equal(affine_to_joint_state(AffineQubitChannel::identity()).matrix(), phi_plus(), 1e-15));

  for (double p : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(0, 0) = 2.0 / 4;
    expected(0, 3) = expected(3, 0) = 2.0 * std::sqrt(1 - p) / 4;
    expected(2, 2) = 2.0 * p / 4;
    expected(3, 3) = (2.0 - 2.0 * p) / 4;
    EXPECT_TRUE(approx_equal(affine_to_joint_state(amplitude_damping_qubit(p)).matrix(), expected, 1e-15)) << p;
  }
}

TEST(Affine, JointStateDiagonalInTermsOfParameters) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const AffineQubitChannel ch = kraus_to_affine(random_kraus_channel(2, 2, rng));
    const DensityMatrix rho = affine_to_joint_state(ch);
    const double rzz = ch.R(0, 0), tz = ch.t(0);
    EXPECT_NEAR(rho(0, 0).real(), (1 + rzz + tz) / 4, 1e-12);
    EXPECT_NEAR(rho(1, 1).real(), (1 - rzz - tz) / 4, 1e-12);
    EXPECT_NEAR(rho(2, 2).real(), (1 - rzz + tz) / 4, 1e-12);
    EXPECT_NEAR(rho(3, 3).real(), (1 + rzz - tz) / 4, 1e-12);
  }
}

TEST(Affine, NonCompletelyPositiveRejected) {
  AffineQubitChannel transpose;  // Bloch reflection y → −y is positive but not CP
  transpose.R = Eigen::Vector3d(1, 1, -1).asDiagonal();
  try {
    affine_to_joint_state(transpose);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotCompletelyPositive);
  }
}

TEST(Kraus, CompletenessValidated) {
  EXPECT_THROW(KrausChannel({ComplexMatrix::Identity(2, 2) * 0.9}), Error);
  EXPECT_NO_THROW(KrausChannel({ComplexMatrix::Identity(2, 2) * (1 + 1e-10)}));
}

TEST(Kraus, ApplyExamples) {
  ComplexMatrix rho(3, 3);
  rho << 0.5, 0.1, 0, 0.1, 0.3, 0, 0, 0, 0.2;
  EXPECT_TRUE(approx_equal(kraus_apply(KrausChannel::identity(3), DensityMatrix(rho)).matrix(), rho, 1e-15));

  ComplexMatrix two = ComplexMatrix::Zero(3, 3);
  two(2, 2) = 1;
  ComplexMatrix zero = ComplexMatrix::Zero(3, 3);
  zero(0, 0) = 1;
  EXPECT_TRUE(approx_equal(kraus_apply(amplitude_damping_qutrit(1.0), DensityMatrix(two)).matrix(), zero, 1e-15));

  for (double a : {0.1, 0.4, 0.8}) {
    ComplexMatrix one = ComplexMatrix::Zero(3, 3);
    one(1, 1) = 1;
    ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
    expected(1, 1) = 1 - a;
    expected(0, 0) = a;
    EXPECT_TRUE(approx_equal(kraus_apply(amplitude_damping_qutrit(a), DensityMatrix(one)).matrix(), expected, 1e-15));
  }
}

TEST(Kraus, JointStateMatchesDirectConstruction) {
  std::mt19937_64 rng(21);
  for (int d : {2, 3, 5}) {
    for (int trial = 0; trial < 5; ++trial) {
      const KrausChannel ch = random_kraus_channel(d, 1 + trial, rng);
      EXPECT_TRUE(approx_equal(kraus_to_joint_state(ch).matrix(), oracle::joint_state(ch.operators()), 1e-12));
    }
  }
  EXPECT_TRUE(approx_equal(kraus_to_joint_state(KrausChannel::identity(3)).matrix(),
                           bell_state(0, 0, 3) * bell_state(0, 0, 3).adjoint(), 1e-15));
}

TEST(Kraus, QutritDepolarizingIsBellDiagonal) {
  for (double q : {0.0, 0.3, 1.0}) {
    const DensityMatrix rho = kraus_to_joint_state(depolarizing(3, q));
    const ComplexMatrix b = bell_basis(3);
    const ComplexMatrix m = b.adjoint() * rho.matrix() * b;
    EXPECT_NEAR(m(0, 0).real(), 1 - q + q / 9, 1e-12);
    for (int i = 1; i < 9; ++i) EXPECT_NEAR(m(i, i).real(), q / 9, 1e-12);
    EXPECT_NEAR((m - ComplexMatrix(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  }
  // ℰ(ρ) = (1−q)ρ + q I/d
  ComplexMatrix rho(3, 3);
  rho << 0.5, Complex(0.1, 0.1), 0, Complex(0.1, -0.1), 0.3, 0, 0, 0, 0.2;
  const ComplexMatrix out = depolarizing(3, 0.4).apply(rho);
  EXPECT_TRUE(approx_equal(out, 0.6 * rho + 0.4 * ComplexMatrix::Identity(3, 3) / 3.0, 1e-12));
}

TEST(Kraus, QutritAmplitudeDampingComplete) {
  for (int i = 0; i <= 50; ++i) {
    const double a = i / 50.0;
    const KrausChannel ch = amplitude_damping_qutrit(a);
    ComplexMatrix sum = ComplexMatrix::Zero(3, 3);
    for (const auto& op : ch.operators()) sum += op.adjoint() * op;
    EXPECT_TRUE(approx_equal(sum, ComplexMatrix::Identity(3, 3), 1e-12));
  }
  EXPECT_THROW(amplitude_damping_qutrit(1.5), Error);
}

TEST(Kraus, AffineConversion) {
  // Kraus form of qubit amplitude damping
  const double p = 0.3;
  ComplexMatrix a0 = ComplexMatrix::Zero(2, 2), a1 = ComplexMatrix::Zero(2, 2);
  a0(0, 0) = 1;
  a0(1, 1) = std::sqrt(1 - p);
  a1(0, 1) = std::sqrt(p);
  const AffineQubitChannel ch = kraus_to_affine(KrausChannel({a0, a1}));
  const AffineQubitChannel expected = amplitude_damping_qubit(p);
  EXPECT_TRUE(ch.R.isApprox(expected.R, 1e-12));
  EXPECT_NEAR((ch.t - expected.t).norm(), 0.0, 1e-12);
}

TEST(Catalog, ChannelExamples) {
  EXPECT_TRUE(approx_equal(kraus_to_joint_state(depolarizing(3, 0)).matrix(),
                           kraus_to_joint_state(KrausChannel::identity(3)).matrix(), 1e-15));
  EXPECT_TRUE(approx_equal(pdl_state(0.4, 0.4).matrix(), phi_plus(), 1e-15));
  EXPECT_NEAR(transmittance(0.2, 100, 1), 0.01, 1e-15);

  const AffineQubitChannel pr = probabilistic_rotation(0.7);
  const double c = std::cos(0.7), s = std::sin(0.7);
  Eigen::Matrix3d expected;
  expected << 2 * c, -s, -s, s, 1 + c, 0, s, 0, 1 + c;
  EXPECT_TRUE(pr.R.isApprox(expected / 2, 1e-14));
}

TEST(Catalog, DomainErrors) {
  EXPECT_THROW(amplitude_damping_qubit(-0.1), Error);
  EXPECT_THROW(depolarizing(4, 0.1), Error);
  EXPECT_THROW(pdl_state(0.0, 0.5), Error);
  PmdConfig bad;
  bad.r_overlap = 1.2;
  EXPECT_THROW(pmd_state(bad), Error);
}

TEST(Catalog, JointStatesValidAcrossGrids) {
  for (int i = 0; i <= 50; ++i) {
    const double x = i / 50.0;
    const double angle = kPi * x;
    EXPECT_GE(min_eigenvalue(affine_to_joint_state(amplitude_damping_qubit(x))), -1e-9);
    EXPECT_GE(min_eigenvalue(kraus_to_joint_state(amplitude_damping_qutrit(x))), -1e-9);
    EXPECT_GE(min_eigenvalue(kraus_to_joint_state(depolarizing(3, x))), -1e-9);
    EXPECT_GE(min_eigenvalue(affine_to_joint_state(rotation(angle, 0.5 * angle, -angle))), -1e-9);
    EXPECT_GE(min_eigenvalue(affine_to_joint_state(probabilistic_rotation(angle))), -1e-9);
    EXPECT_GE(min_eigenvalue(pdl_state(0.02 + 0.98 * x, 0.5)), -1e-9);
    PmdConfig cfg;
    cfg.beta = angle / 4;
    cfg.r_overlap = 0.9;
    EXPECT_GE(min_eigenvalue(pmd_state(cfg)), -1e-9);
  }
}

TEST(Pmd, UnitOverlapGivesPureState) {
  for (double beta : {0.0, 0.3, kPi / 4}) {
    PmdConfig cfg;
    cfg.beta = beta;
    cfg.r_overlap = 1.0;
    cfg.tau_a = 0.4;
    const DensityMatrix rho = pmd_state(cfg);
    const RealVector ev = rho.eigenvalues();
    EXPECT_NEAR(ev(3), 1.0, 1e-10);
    EXPECT_NEAR(ev.head(3).cwiseAbs().sum(), 0.0, 1e-10);
  }
}

TEST(Pmd, AutocorrelationShape) {
  PmdConfig cfg;
  cfg.r_overlap = 0.9;
  cfg.tau_b = 2.0;
  EXPECT_DOUBLE_EQ(pmd_autocorrelation(cfg, 0.0), 1.0);
  EXPECT_NEAR(pmd_autocorrelation(cfg, 2.0), 0.9, 1e-15);
  EXPECT_NEAR(pmd_autocorrelation(cfg, -2.0), 0.9, 1e-15);
  EXPECT_LT(pmd_autocorrelation(cfg, 4.0), 0.9);
}

TEST(Pmd, ZeroMisalignmentIsDephasedBellPair) {
  // β = 0: branches |00⟩, |01⟩, |10⟩, |11⟩ with weights (1, 0, 0, 1)/2; the |00⟩–|11⟩
  // coherence is damped by R(τ_B).
  PmdConfig cfg;
  cfg.r_overlap = 0.8;
  const DensityMatrix rho = pmd_state(cfg);
  EXPECT_NEAR(rho(0, 0).real(), 0.5, 1e-14);
  EXPECT_NEAR(rho(3, 3).real(), 0.5, 1e-14);
  EXPECT_NEAR(std::abs(rho(0, 3)), 0.4, 1e-14);
}

TEST(Drift, ZeroSigmaIsExactRotation) {
  DriftConfig cfg;
  cfg.alpha = 0.3;
  cfg.beta = -0.2;
  cfg.gamma = 1.1;
  cfg.samples = 10;
  EXPECT_TRUE(averaged_drift_channel(cfg).R.isApprox(rotation(1.1, -0.2, 0.3).R, 1e-15));
}

TEST(Drift, DeterministicForSeed) {
  DriftConfig cfg;
  cfg.alpha = cfg.beta = cfg.gamma = kPi / 6;
  cfg.sigma = kPi / 12;
  cfg.samples = 5000;
  cfg.seed = 99;
  const Eigen::Matrix3d a = averaged_drift_channel(cfg).R;
  const Eigen::Matrix3d b = averaged_drift_channel(cfg).R;
  EXPECT_EQ(a, b);
  cfg.seed = 100;
  EXPECT_NE(a, averaged_drift_channel(cfg).R);
}

TEST(Drift, SingleAxisAverageMatchesGaussianDamping) {
  // E[cos(θ+Δ)] = cos θ · exp(−σ²/2) for Δ ~ N(0, σ²)
  DriftConfig cfg;
  cfg.beta = 0.4;
  cfg.sigma = 0.3;
  cfg.samples = 200000;
  cfg.seed = 4;
  const Eigen::Matrix3d r = averaged_drift_channel(cfg).R;
  // R_zz = cos(γ+Δγ) cos(β+Δβ), and only β has a nonzero mean
  const double damping = std::exp(-cfg.sigma * cfg.sigma / 2);
  EXPECT_NEAR(r(0, 0), std::cos(0.4) * damping * damping, 5e-3);
}

TEST(Mixing, MixtureOfKrausChannels) {
  const KrausChannel a = depolarizing(3, 0.2);
  const KrausChannel b = amplitude_damping_qutrit(0.4);
  const KrausChannel m = mix_channels(a, b, 0.3);
  ComplexMatrix rho(3, 3);
  rho << 0.5, 0.1, 0, 0.1, 0.3, Complex(0, 0.05), 0, Complex(0, -0.05), 0.2;
  EXPECT_TRUE(approx_equal(m.apply(rho), 0.3 * a.apply(rho) + 0.7 * b.apply(rho), 1e-14));
}
