#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tqkd/errors.hpp"
#include "tqkd/qmath.hpp"

using namespace tqkd;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected tqkd::Error";
  return ErrorCode::Io;
}

}  // namespace

TEST(Entropy, ShannonExamples) {
  EXPECT_NEAR(shannon_entropy(std::vector<double>{1, 0, 0}), 0.0, 1e-15);
  EXPECT_NEAR(shannon_entropy(std::vector<double>{1. / 3, 1. / 3, 1. / 3}), std::log2(3.0), 1e-12);
  EXPECT_NEAR(shannon_entropy(std::vector<double>{0.25, 0.75}), 0.811278124459, 1e-11);
}

TEST(Entropy, ShannonRejectsInvalid) {
  EXPECT_EQ(code_of([] { shannon_entropy(std::vector<double>{1.1, -0.1}); }), ErrorCode::InvalidDistribution);
  EXPECT_EQ(code_of([] { shannon_entropy(std::vector<double>{0.5, 0.4}); }), ErrorCode::InvalidDistribution);
  EXPECT_NO_THROW(shannon_entropy(std::vector<double>{0.5 + 5e-7, 0.5}));
}

TEST(Entropy, BinaryEntropy) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_DOUBLE_EQ(binary_entropy(0.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.25), 0.811278124459, 1e-11);
  EXPECT_NO_THROW(binary_entropy(1.0 + 5e-13));
  EXPECT_EQ(code_of([] { binary_entropy(-1e-9); }), ErrorCode::Domain);
}

TEST(Entropy, VonNeumann) {
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix(ComplexMatrix::Identity(2, 2) / 2.0)), 1.0, 1e-12);
  ComplexVector psi(3);
  psi << Complex(0.3, 0.1), 0.5, Complex(0, -0.2);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::from_pure(psi)), 0.0, 1e-10);

  // Bell-diagonal state with a chosen spectrum
  const std::vector<double> lambda{0.4, 0.3, 0.2, 0.1};
  const ComplexMatrix b = bell_basis(2);
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) rho += lambda[i] * b.col(i) * b.col(i).adjoint();
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix(rho)), oracle::entropy(lambda), 1e-12);
}

TEST(Entropy, UnitaryInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix g = random_unitary(4, rng);
    ComplexMatrix rho = g.leftCols(2) * Eigen::Vector2d(0.7, 0.3).cast<Complex>().asDiagonal() * g.leftCols(2).adjoint();
    const ComplexMatrix u = random_unitary(4, rng);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix(rho)),
                von_neumann_entropy(DensityMatrix::normalized(u * rho * u.adjoint())), 1e-9);
  }
}

TEST(Entropy, NegativeEigenvalueRejected) {
  EXPECT_EQ(code_of([] { von_neumann_entropy_of_spectrum(std::vector<double>{1.0 + 1e-9, -1e-9}); }),
            ErrorCode::NotPositiveSemidefinite);
  EXPECT_NEAR(von_neumann_entropy_of_spectrum(std::vector<double>{1.0, -5e-11}), 0.0, 1e-15);
}

TEST(DensityMatrixType, ValidatesInvariants) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2) / 2.0;
  m(0, 1) = 0.1;
  EXPECT_EQ(code_of([&] { DensityMatrix{m}; }), ErrorCode::Domain);
  EXPECT_ANY_THROW(DensityMatrix(ComplexMatrix::Identity(2, 2)));
  ComplexMatrix neg(2, 2);
  neg << 1.2, 0, 0, -0.2;
  EXPECT_EQ(code_of([&] { DensityMatrix{neg}; }), ErrorCode::NotPositiveSemidefinite);
}

TEST(Weyl, Examples) {
  EXPECT_TRUE(approx_equal(weyl_operator(0, 0, 3), ComplexMatrix::Identity(3, 3), 1e-15));
  ComplexMatrix z(2, 2), x(2, 2);
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  EXPECT_TRUE(approx_equal(weyl_operator(0, 1, 2), z, 1e-15));
  EXPECT_TRUE(approx_equal(weyl_operator(1, 0, 2), x, 1e-15));

  const ComplexMatrix u = weyl_operator(1, 1, 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const Complex expected = r == (c + 1) % 3 ? oracle::omega_pow(c, 3) : Complex(0);
      EXPECT_NEAR(std::abs(u(r, c) - expected), 0.0, 1e-15);
    }
  }
  EXPECT_EQ(code_of([] { weyl_operator(0, 1, 4); }), ErrorCode::UnsupportedDimension);
}

TEST(Weyl, UnitaryAndComposition) {
  for (int d : {2, 3, 5}) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        const ComplexMatrix u = weyl_operator(j, k, d);
        EXPECT_TRUE(approx_equal(u.adjoint() * u, ComplexMatrix::Identity(d, d), 1e-12));
        for (int jj = 0; jj < d; ++jj) {
          for (int kk = 0; kk < d; ++kk) {
            const ComplexMatrix prod = u * weyl_operator(jj, kk, d);
            const ComplexMatrix target = weyl_operator((j + jj) % d, (k + kk) % d, d);
            EXPECT_TRUE(approx_equal(prod.cwiseAbs().cast<Complex>(), target.cwiseAbs().cast<Complex>(), 1e-12));
          }
        }
      }
    }
  }
}

TEST(Bell, ExamplesAndOrthonormality) {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector phi(4), psi(4);
  phi << r, 0, 0, r;
  psi << 0, r, r, 0;
  EXPECT_TRUE(approx_equal(bell_state(0, 0, 2), phi, 1e-15));
  EXPECT_TRUE(approx_equal(bell_state(1, 0, 2), psi, 1e-15));
  for (int d : {2, 3, 5, 7}) {
    const ComplexMatrix b = bell_basis(d);
    EXPECT_TRUE(approx_equal(b.adjoint() * b, ComplexMatrix::Identity(d * d, d * d), 1e-10)) << "d=" << d;
    // |Φ_jk⟩ = (I ⊗ U_jk)|Φ00⟩
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        EXPECT_TRUE(approx_equal(bell_state(j, k, d), oracle::apply_on_bob(weyl_operator(j, k, d), oracle::phi00(d), d), 1e-12));
  }
}

TEST(Mub, UnbiasedForSmallPrimes) {
  for (int d : {2, 3, 5, 7}) {
    const MubFamily m = mub_family(d);
    ASSERT_EQ(m.num_families(), d + 1);
    for (int g = 0; g <= d; ++g) {
      EXPECT_TRUE(approx_equal(m.basis(g).adjoint() * m.basis(g), ComplexMatrix::Identity(d, d), 1e-10));
      for (int e = 0; e <= d; ++e) {
        if (e == g) continue;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) EXPECT_NEAR(std::norm(m.vector(g, a).dot(m.vector(e, b))), 1.0 / d, 1e-10);
      }
    }
  }
  EXPECT_EQ(code_of([] { mub_family(6); }), ErrorCode::UnsupportedDimension);
}

TEST(Mub, FamiliesDiagonalizeTheirWeylOperator) {
  for (int d : {2, 3, 5, 7}) {
    const MubFamily m = mub_family(d);
    EXPECT_TRUE(approx_equal(m.basis(0), ComplexMatrix::Identity(d, d), 0.0));
    for (int g = 0; g <= d; ++g) {
      const auto [j, k] = m.weyl_label(g);
      EXPECT_EQ(j, g == 0 ? 0 : 1);
      const ComplexMatrix u = weyl_operator(j, k, d);
      const Complex e0 = m.vector(g, 0).dot(u * m.vector(g, 0));
      for (int s = 0; s < d; ++s) {
        const ComplexVector v = m.vector(g, s);
        const Complex e = v.dot(u * v);
        EXPECT_NEAR((u * v - e * v).norm(), 0.0, 1e-10);
        // label s carries eigenvalue ω^s relative to label 0
        EXPECT_NEAR(std::abs(e - e0 * oracle::omega_pow(s, d)), 0.0, 1e-10);
      }
    }
  }
}

TEST(Mub, QubitFamiliesAreZXY) {
  const MubFamily m = mub_family(2);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(m.vector(1, 0)(0) - r) + std::abs(m.vector(1, 0)(1) - r), 0.0, 1e-15);
  // family 2 vectors are σ_y eigenvectors
  ComplexMatrix y(2, 2);
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  for (int s = 0; s < 2; ++s) {
    const ComplexVector v = m.vector(2, s);
    EXPECT_NEAR(std::abs(std::abs(v.dot(y * v)) - 1.0), 0.0, 1e-12);
  }
}

TEST(Conditional, Examples) {
  for (int d : {2, 3}) {
    const DensityMatrix phi = DensityMatrix::from_pure(bell_state(0, 0, d));
    const ConditionalState c = conditional_bob_state(phi, 0);
    EXPECT_NEAR(c.probability, 1.0 / d, 1e-15);
    EXPECT_NEAR(std::abs(c.state(0, 0) - 1.0), 0.0, 1e-15);
  }

  ComplexMatrix ra(2, 2), rb(2, 2);
  ra << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
  rb << 0.6, Complex(0.0, 0.1), Complex(0.0, -0.1), 0.4;
  const DensityMatrix product(kron(ra, rb));
  for (int i = 0; i < 2; ++i) {
    const ConditionalState c = conditional_bob_state(product, i);
    EXPECT_NEAR(c.probability, ra(i, i).real(), 1e-14);
    EXPECT_TRUE(approx_equal(c.state.matrix(), rb, 1e-14));
  }

  ComplexMatrix zero_zero = ComplexMatrix::Zero(2, 2);
  zero_zero(0, 0) = 1.0;
  const DensityMatrix alice_fixed(kron(zero_zero, ComplexMatrix::Identity(2, 2) / 2.0));
  EXPECT_EQ(code_of([&] { conditional_bob_state(alice_fixed, 1); }), ErrorCode::ZeroProbabilityOutcome);
}

TEST(Conditional, QubitAmplitudeDampingBlock) {
  // Computational-basis block of the damped state at p = 0.5.
  const double p = 0.5;
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(0, 0) = 0.5;
  rho(0, 3) = rho(3, 0) = 0.5 * std::sqrt(1 - p);
  rho(2, 2) = p / 2;
  rho(3, 3) = (1 - p) / 2;
  const ConditionalState c = conditional_bob_state(DensityMatrix(rho), 1);
  // Alice's marginal is uniform, so the block weight is 1/2; its |0⟩ entry is 1/4.
  EXPECT_NEAR(c.probability, 0.5, 1e-15);
  EXPECT_NEAR(alice_block(DensityMatrix(rho), 1)(0, 0).real(), 0.25, 1e-15);
}

TEST(Conditional, BlockWeightsSumToOne) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix u = random_unitary(9, rng);
    ComplexMatrix rho = u.leftCols(3) * Eigen::Vector3d(0.5, 0.3, 0.2).cast<Complex>().asDiagonal() * u.leftCols(3).adjoint();
    const DensityMatrix state = DensityMatrix::normalized(rho);
    double total = 0.0;
    for (int i = 0; i < 3; ++i) total += conditional_bob_state(state, i).probability;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Projection, ClipsNegativeSpectrum) {
  ComplexMatrix m(2, 2);
  m << 1.1, 0, 0, -0.1;
  const PsdProjection p = project_to_density_matrix(m);
  EXPECT_NEAR(p.clipped_weight, 0.1, 1e-15);
  EXPECT_NEAR(p.state(0, 0).real(), 1.0, 1e-15);
}
