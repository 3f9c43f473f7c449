#include "tqkd/tomography.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "tqkd/errors.hpp"

namespace tqkd {

namespace {

constexpr double kExactResidualLimit = 1e-4;
constexpr double kReconstructionPsdLimit = 1e-6;

// Eigenvectors of σ_z, σ_x, σ_y with eigenvalue +1 (k = 0) and −1 (k = 1).
ComplexVector axis_state(int axis, int k) {
  const double r = 1.0 / std::sqrt(2.0);
  const double sign = k == 0 ? 1.0 : -1.0;
  ComplexVector v(2);
  switch (axis) {
    case 0:
      v << (k == 0 ? 1.0 : 0.0), (k == 0 ? 0.0 : 1.0);
      break;
    case 1:
      v << r, sign * r;
      break;
    default:
      v << r, Complex(0.0, sign * r);
      break;
  }
  return v;
}

// Least-squares system for χ; it depends only on d, so it is built once per dimension.
struct TomographySystem {
  int d;
  int n;  // number of projectors d(d+1)
  MubFamily mubs;
  RealMatrix a;
  Eigen::CompleteOrthogonalDecomposition<RealMatrix> solver;
  ComplexMatrix v;       // columns (I ⊗ 𝒫_a)|Φ00⟩
  ComplexMatrix v_pinv;  // V†(VV†)⁻¹

  explicit TomographySystem(int dim) : d(dim), n(dim * (dim + 1)), mubs(mub_family(dim)) {
    ComplexMatrix gram(n, n);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) gram(x, y) = mubs.vector(x).dot(mubs.vector(y));
    }

    a = RealMatrix::Zero(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(n) * n);
    const double inv_d = 1.0 / d;
    for (int lr = 0; lr < n; ++lr) {
      for (int sc = 0; sc < n; ++sc) {
        const Eigen::Index row = static_cast<Eigen::Index>(lr) * n + sc;
        for (int m = 0; m < n; ++m) {
          const Complex left = gram(sc, m) * gram(m, lr);
          a(row, m * n + m) = inv_d * (left * gram(lr, m) * gram(m, sc)).real();
          for (int k = m + 1; k < n; ++k) {
            // Tr(𝒫_m 𝒫_L 𝒫_k 𝒫_S) = ⟨m|L⟩⟨L|k⟩⟨k|S⟩⟨S|m⟩
            const Complex c = inv_d * gram(m, lr) * gram(lr, k) * gram(k, sc) * gram(sc, m);
            a(row, m * n + k) = 2.0 * c.real();
            a(row, k * n + m) = -2.0 * c.imag();
          }
        }
      }
    }
    solver.compute(a);

    const ComplexVector phi = bell_state(0, 0, d);
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    v.resize(d * d, n);
    for (int x = 0; x < n; ++x) v.col(x) = kron(id, mubs.projector(x / d, x % d)) * phi;
    v_pinv = v.adjoint() * (v * v.adjoint()).inverse();
  }
};

const TomographySystem& system_for(int d) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<TomographySystem>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[d];
  if (!slot) slot = std::make_unique<TomographySystem>(d);
  return *slot;
}

ComplexMatrix chi_from_solution(const RealVector& x, int n) {
  ComplexMatrix chi(n, n);
  for (int m = 0; m < n; ++m) {
    chi(m, m) = x(m * n + m);
    for (int k = m + 1; k < n; ++k) {
      chi(m, k) = Complex(x(m * n + k), x(k * n + m));
      chi(k, m) = std::conj(chi(m, k));
    }
  }
  return chi;
}

double trace_preservation_error(const ComplexMatrix& rho, int d) {
  // Tr_B of the joint state must be I/d.
  ComplexMatrix reduced = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) reduced(i, j) = rho.block(i * d, j * d, d, d).trace();
  }
  return (reduced - ComplexMatrix::Identity(d, d) / static_cast<double>(d)).cwiseAbs().maxCoeff();
}

}  // namespace

void BiasTable::validate() const {
  for (const auto& row : q) {
    for (const auto& pair : row) {
      for (double x : pair) {
        if (!(x >= -1.0 - 1e-12 && x <= 1.0 + 1e-12)) {
          throw Error(ErrorCode::Domain, "bias " + std::to_string(x) + " outside [-1, 1]");
        }
      }
    }
  }
}

BiasTable biases_from_channel(const AffineQubitChannel& ch) {
  BiasTable out;
  for (int a = 0; a < 3; ++a) {
    for (int k = 0; k < 2; ++k) {
      const ComplexVector in = axis_state(a, k);
      const ComplexMatrix rho = apply_affine_operator(ch, in * in.adjoint());
      for (int b = 0; b < 3; ++b) {
        const ComplexVector up = axis_state(b, 0);
        const ComplexVector down = axis_state(b, 1);
        const double bias = (up.dot(rho * up) - down.dot(rho * down)).real();
        // Q_ab1 is quoted for the correlated outcome, so the bias of |1_a⟩ is sign-flipped.
        out.q[a][b][k] = k == 0 ? bias : -bias;
      }
    }
  }
  return out;
}

AffineQubitChannel affine_from_biases(const BiasTable& b) {
  b.validate();
  AffineQubitChannel ch;
  for (int a = 0; a < 3; ++a) {
    for (int c = 0; c < 3; ++c) ch.R(c, a) = 0.5 * (b.q[a][c][0] + b.q[a][c][1]);
  }
  // every preparation axis carries the same t; use the z preparations
  for (int c = 0; c < 3; ++c) ch.t(c) = 0.5 * (b.q[0][c][0] - b.q[0][c][1]);
  return ch;
}

JointProbabilityTable::JointProbabilityTable(int d, RealMatrix p, double block_tolerance)
    : d_(d), p_(std::move(p)) {
  require_prime(d);
  const int n = d * (d + 1);
  if (p_.rows() != n || p_.cols() != n) {
    throw Error(ErrorCode::Domain, "probability table must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  for (Eigen::Index r = 0; r < p_.rows(); ++r) {
    for (Eigen::Index c = 0; c < p_.cols(); ++c) {
      if (!std::isfinite(p_(r, c)) || p_(r, c) < -tol::kDistribution) {
        throw Error(ErrorCode::InvalidDistribution, "entry (" + std::to_string(r) + ", " + std::to_string(c) +
                                                        ") = " + std::to_string(p_(r, c)));
      }
    }
  }
  const double dev = max_block_deviation();
  if (dev > block_tolerance) {
    throw Error(ErrorCode::InvalidDistribution, "block sum deviates from 1 by " + std::to_string(dev));
  }
}

double JointProbabilityTable::max_block_deviation() const {
  double worst = 0.0;
  for (int g = 0; g <= d_; ++g) {
    for (int e = 0; e <= d_; ++e) worst = std::max(worst, std::abs(block(g, e).sum() - 1.0));
  }
  return worst;
}

JointProbabilityTable predict_probabilities(const DensityMatrix& rho_ab) {
  const int d = local_dimension(rho_ab);
  const MubFamily mubs = mub_family(d);
  const int n = mubs.num_projectors();
  RealMatrix p(n, n);
  for (int x = 0; x < n; ++x) {
    const ComplexVector alice = mubs.vector(x).conjugate();
    for (int y = 0; y < n; ++y) {
      const ComplexVector joint = kron(alice, mubs.vector(y));
      p(x, y) = std::max(0.0, joint.dot(rho_ab.matrix() * joint).real());
    }
  }
  return JointProbabilityTable(d, std::move(p));
}

JointProbabilityTable predict_probabilities(const KrausChannel& ch) {
  return predict_probabilities(kraus_to_joint_state(ch));
}

ProcessMatrix solve_process_matrix(const JointProbabilityTable& table, const SolveOptions& options) {
  const TomographySystem& sys = system_for(table.dim());
  const int n = sys.n;
  RealVector b(static_cast<Eigen::Index>(n) * n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) b(static_cast<Eigen::Index>(x) * n + y) = table.matrix()(x, y);
  }
  const RealVector x = sys.solver.solve(b);

  ProcessMatrix out;
  out.dim = sys.d;
  out.equations = static_cast<int>(sys.a.rows());
  out.rank = static_cast<int>(sys.solver.rank());
  out.residual = (sys.a * x - b).norm();
  if (!std::isfinite(out.residual)) {
    throw Error(ErrorCode::ReconstructionFailure, "least-squares solve produced non-finite values");
  }
  if (options.exact_input && out.residual > kExactResidualLimit) {
    throw Error(ErrorCode::InconsistentData, "residual " + std::to_string(out.residual) + " for noiseless input");
  }
  out.warning = out.residual > options.residual_threshold;

  const ComplexMatrix chi = chi_from_solution(x, n);
  const PsdProjection projected = project_to_density_matrix(sys.v * chi * sys.v.adjoint());
  out.clipped_weight = projected.clipped_weight;
  out.chi = sys.v_pinv * projected.state.matrix() * sys.v_pinv.adjoint();
  out.chi = 0.5 * (out.chi + out.chi.adjoint());
  out.trace_preservation_error = trace_preservation_error(projected.state.matrix(), sys.d);
  return out;
}

ComplexMatrix apply_process(const ProcessMatrix& chi, const ComplexMatrix& m) {
  const MubFamily mubs = mub_family(chi.dim);
  const int n = mubs.num_projectors();
  const int d = chi.dim;
  std::vector<ComplexMatrix> proj;
  proj.reserve(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) proj.push_back(mubs.projector(x / d, x % d));
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int x = 0; x < n; ++x) {
    const ComplexMatrix left = proj[static_cast<std::size_t>(x)] * m;
    for (int y = 0; y < n; ++y) out += chi.chi(x, y) * left * proj[static_cast<std::size_t>(y)];
  }
  return out;
}

DensityMatrix process_to_joint_state(const ProcessMatrix& chi) {
  const TomographySystem& sys = system_for(chi.dim);
  if (chi.chi.rows() != sys.n || chi.chi.cols() != sys.n) {
    throw Error(ErrorCode::Domain, "process matrix has the wrong size");
  }
  ComplexMatrix rho = sys.v * chi.chi * sys.v.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho, Eigen::EigenvaluesOnly);
  const double tr = rho.trace().real();
  if (!(tr > 0.0) || eig.eigenvalues().minCoeff() < -kReconstructionPsdLimit * tr) {
    throw Error(ErrorCode::ReconstructionFailure,
                "induced joint state has eigenvalue " + std::to_string(eig.eigenvalues().minCoeff()));
  }
  return project_to_density_matrix(rho).state;
}

ErrorVectors::ErrorVectors(int d, std::vector<ProbabilityVector> by_family) : d_(d), q_(std::move(by_family)) {
  if (static_cast<int>(q_.size()) != d + 1) throw Error(ErrorCode::Domain, "need d+1 error vectors");
  for (const auto& v : q_) {
    if (static_cast<int>(v.size()) != d) throw Error(ErrorCode::Domain, "error vector length must be d");
  }
}

const ProbabilityVector& ErrorVectors::at(int j, int k) const {
  if (j == 0 && k == 1) return q_[0];
  if (j == 1 && k >= 0 && k < d_) return q_[static_cast<std::size_t>(k) + 1];
  throw Error(ErrorCode::Domain, "no error vector for Weyl label (" + std::to_string(j) + ", " + std::to_string(k) + ")");
}

ErrorVectors error_vectors(const JointProbabilityTable& table) {
  const int d = table.dim();
  std::vector<ProbabilityVector> out;
  out.reserve(static_cast<std::size_t>(d) + 1);
  for (int g = 0; g <= d; ++g) {
    const RealMatrix block = table.block(g, g);
    const double total = block.sum();
    if (!(total > 0.0)) throw Error(ErrorCode::InvalidDistribution, "matched block has zero weight");
    std::vector<double> q(static_cast<std::size_t>(d), 0.0);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) q[static_cast<std::size_t>(((b - a) % d + d) % d)] += std::max(0.0, block(a, b));
    }
    double sum = 0.0;
    for (double v : q) sum += v;
    for (double& v : q) v /= sum;
    out.emplace_back(std::move(q));
  }
  return ErrorVectors(d, std::move(out));
}

RealMatrix key_basis_distribution(const JointProbabilityTable& table) {
  RealMatrix block = table.block(0, 0).cwiseMax(0.0);
  const double total = block.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidDistribution, "key-basis block has zero weight");
  return block / total;
}

}  // namespace tqkd
