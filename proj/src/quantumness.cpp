#include "hpath/quantumness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hpath {

namespace {

constexpr int kMaxHalvings = 60;
constexpr double kPointerOrthonormalityTol = 1e-10;
constexpr double kPathNormTol = 1e-10;
constexpr double kTieTol = 1e-9;
// Size of the seeded tilt away from the Schroedinger path at the last slice.
constexpr double kSeedTilt = 0.1;

// Row-major reshape of psi into a d_a x d_b matrix: M(a, b) = psi(a * d_b + b).
CMatrix reshape_bipartite(const CVector& psi, Index d_a, Index d_b) {
  CMatrix m(d_a, d_b);
  for (Index a = 0; a < d_a; ++a)
    for (Index b = 0; b < d_b; ++b) m(a, b) = psi(a * d_b + b);
  return m;
}

CVector flatten_bipartite(const CMatrix& m) {
  CVector v(m.size());
  for (Index a = 0; a < m.rows(); ++a)
    for (Index b = 0; b < m.cols(); ++b) v(a * m.cols() + b) = m(a, b);
  return v;
}

// Real coordinates [Re v; Im v]; the real inner product is Re<a, b>.
RVector to_real(const CVector& v) {
  RVector r(2 * v.size());
  r << v.real(), v.imag();
  return r;
}

CVector to_complex(const RVector& r) {
  const Index d = r.size() / 2;
  CVector v(d);
  v.real() = r.head(d);
  v.imag() = r.tail(d);
  return v;
}

// Solves  -X_{k-1} + (l_k I + C_k) X_k - X_{k+1} = R_k,  k = 1..N, in real
// coordinates. l_k is the path Laplacian diagonal (2 inside, 1 at the free
// end, X_0 = 0) and C_k is a positive semidefinite curvature block. Column j
// of R belongs to slice j + 1. The system matrix is positive definite, so the
// solution is an ascent direction for any gradient right-hand side.
CMatrix solve_block_chain(const CMatrix& rhs, const std::vector<Eigen::MatrixXd>& curvature) {
  const Index n = rhs.cols();
  const Index m = 2 * rhs.rows();
  std::vector<Eigen::MatrixXd> gamma(static_cast<std::size_t>(n));
  Eigen::MatrixXd y(m, n);
  Eigen::MatrixXd carry = Eigen::MatrixXd::Zero(m, m);
  for (Index k = 0; k < n; ++k) {
    const double laplacian = k + 1 < n ? 2.0 : 1.0;
    Eigen::MatrixXd block = laplacian * Eigen::MatrixXd::Identity(m, m) +
                            curvature[static_cast<std::size_t>(k)] + carry;
    block = 0.5 * (block + block.transpose()).eval();
    const Eigen::LLT<Eigen::MatrixXd> llt(block);
    RVector r = to_real(rhs.col(k));
    if (k > 0) r += y.col(k - 1);
    y.col(k) = llt.solve(r);
    gamma[static_cast<std::size_t>(k)] = -llt.solve(Eigen::MatrixXd::Identity(m, m));
    carry = gamma[static_cast<std::size_t>(k)];
  }
  for (Index k = n - 2; k >= 0; --k) {
    y.col(k) -= gamma[static_cast<std::size_t>(k)] * y.col(k + 1);
  }
  CMatrix out(rhs.rows(), n);
  for (Index k = 0; k < n; ++k) out.col(k) = to_complex(y.col(k));
  return out;
}

// Negative Riemannian Hessian of -weight * Q(frame * x) on the unit sphere at
// x, in real coordinates, restricted to the tangent space and clipped to be
// positive semidefinite.
Eigen::MatrixXd penalty_curvature(const QuantumnessMeasure& measure, const CMatrix& frame,
                                  const CVector& x, double weight) {
  const Index d = x.size();
  const CVector y = frame * x;
  // Real gradient of the penalty term, and its radial part.
  const CVector pen = -2.0 * weight * (frame.adjoint() * measure.wirtinger_gradient(y));
  const double radial = x.dot(pen).real();
  Eigen::MatrixXd hess(2 * d, 2 * d);
  for (Index j = 0; j < 2 * d; ++j) {
    CVector e = CVector::Zero(d);
    e(j % d) = j < d ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    const CVector dq = 2.0 * weight * (frame.adjoint() * measure.gradient_derivative(y, frame * e));
    hess.col(j) = to_real(dq);
  }
  const RVector xr = to_real(x);
  const Eigen::MatrixXd tangent = Eigen::MatrixXd::Identity(2 * d, 2 * d) - xr * xr.transpose();
  Eigen::MatrixXd c = tangent * (0.5 * (hess + hess.transpose()) +
                                 radial * Eigen::MatrixXd::Identity(2 * d, 2 * d)) * tangent;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (c + c.transpose()));
  return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).asDiagonal() *
         eig.eigenvectors().transpose();
}

bool is_normalized(const CVector& v) { return std::abs(v.squaredNorm() - 1.0) <= kPathNormTol; }

}  // namespace

QuantumnessMeasure QuantumnessMeasure::pointer_deviation(CMatrix pointer_basis) {
  if (pointer_basis.rows() < 1 || pointer_basis.cols() < 1 ||
      pointer_basis.cols() > pointer_basis.rows()) {
    throw ValidationError("pointer basis must hold between 1 and dim columns");
  }
  const double defect =
      (pointer_basis.adjoint() * pointer_basis -
       CMatrix::Identity(pointer_basis.cols(), pointer_basis.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (defect > kPointerOrthonormalityTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "pointer basis is not orthonormal: max |B^dagger B - I| = " << defect;
    throw ValidationError(msg.str());
  }
  QuantumnessMeasure q;
  q.kind_ = QuantumnessKind::pointer_deviation;
  q.pointer_basis_ = std::move(pointer_basis);
  return q;
}

QuantumnessMeasure QuantumnessMeasure::linear_entropy(Index d_a, Index d_b) {
  if (d_a < 1 || d_b < 1) throw ValidationError("bipartition factors must be >= 1");
  QuantumnessMeasure q;
  q.kind_ = QuantumnessKind::linear_entropy;
  q.partition_ = std::make_pair(d_a, d_b);
  return q;
}

Index QuantumnessMeasure::dim() const {
  if (kind_ == QuantumnessKind::pointer_deviation) return pointer_basis_->rows();
  return partition_->first * partition_->second;
}

double QuantumnessMeasure::value(const CVector& psi) const {
  require_same_dim(dim(), psi.size(), "quantumness");
  if (kind_ == QuantumnessKind::pointer_deviation) {
    return 1.0 - (pointer_basis_->adjoint() * psi).cwiseAbs2().maxCoeff();
  }
  const CMatrix m = reshape_bipartite(psi, partition_->first, partition_->second);
  const CMatrix rho_a = m * m.adjoint();
  return 1.0 - rho_a.squaredNorm();
}

CVector QuantumnessMeasure::wirtinger_gradient(const CVector& psi) const {
  require_same_dim(dim(), psi.size(), "quantumness gradient");
  if (kind_ == QuantumnessKind::pointer_deviation) {
    const CVector amplitudes = pointer_basis_->adjoint() * psi;
    Index best = 0;
    amplitudes.cwiseAbs2().maxCoeff(&best);
    return -amplitudes(best) * pointer_basis_->col(best);
  }
  const CMatrix m = reshape_bipartite(psi, partition_->first, partition_->second);
  return -2.0 * flatten_bipartite(m * m.adjoint() * m);
}

CVector QuantumnessMeasure::gradient_derivative(const CVector& psi, const CVector& v) const {
  require_same_dim(dim(), psi.size(), "quantumness gradient derivative");
  require_same_dim(psi.size(), v.size(), "quantumness gradient derivative");
  if (kind_ == QuantumnessKind::pointer_deviation) {
    const CVector amplitudes = pointer_basis_->adjoint() * psi;
    Index best = 0;
    amplitudes.cwiseAbs2().maxCoeff(&best);
    const CVector p = pointer_basis_->col(best);
    return -p.dot(v) * p;
  }
  const auto [d_a, d_b] = *partition_;
  const CMatrix m = reshape_bipartite(psi, d_a, d_b);
  const CMatrix dm = reshape_bipartite(v, d_a, d_b);
  return -2.0 * flatten_bipartite(dm * m.adjoint() * m + m * dm.adjoint() * m +
                                  m * m.adjoint() * dm);
}

double q_pointer_deviation(const StateVector& psi, const CMatrix& pointer_basis) {
  return std::max(0.0, QuantumnessMeasure::pointer_deviation(pointer_basis).value(psi.amplitudes()));
}

double q_linear_entropy(const StateVector& psi, Index d_a, Index d_b) {
  if (d_a < 1 || d_b < 1 || d_a * d_b != psi.dim()) {
    std::ostringstream msg;
    msg << "dimension " << psi.dim() << " does not factor as " << d_a << " x " << d_b;
    throw ValidationError(msg.str());
  }
  return std::max(0.0, QuantumnessMeasure::linear_entropy(d_a, d_b).value(psi.amplitudes()));
}

void PenalizedPathProblem::validate() const {
  require_same_dim(h.dim(), psi_i.dim(), "penalized problem Hamiltonian");
  require_same_dim(penalty.measure.dim(), psi_i.dim(), "penalized problem measure");
  if (!(penalty.lambda >= 0.0) || !std::isfinite(penalty.lambda)) {
    throw ValidationError("penalty lambda must be a finite nonnegative rate");
  }
  if (!interior_normalization && penalty.lambda != 0.0) {
    throw ValidationError("unnormalized interior slices are only supported with lambda = 0");
  }
}

double penalized_log_magnitude(std::span<const CVector> path, const Hamiltonian& h,
                               const PenaltyConfig& penalty, const TimeGrid& grid) {
  const auto n = static_cast<std::size_t>(grid.steps());
  if (path.size() != n + 1) {
    std::ostringstream msg;
    msg << "endpoint mismatch: path has " << path.size() << " slices, grid needs " << n + 1;
    throw ValidationError(msg.str());
  }
  for (const auto& slice : path) require_same_dim(h.dim(), slice.size(), "penalized path");
  if (!(penalty.lambda >= 0.0)) throw ValidationError("penalty lambda must be nonnegative");

  const double dt = grid.dt();
  const CMatrix step = propagator(h, dt).matrix;
  double dynamics = 0.0;
  for (std::size_t k = 0; k < n; ++k) dynamics -= 0.5 * (path[k + 1] - step * path[k]).squaredNorm();

  double penalty_sum = 0.0;
  if (penalty.lambda > 0.0) {
    require_same_dim(penalty.measure.dim(), h.dim(), "penalized path measure");
    for (std::size_t k = 1; k <= n; ++k) {
      if (!is_normalized(path[k])) {
        throw ValidationError("quantumness is only defined on normalized slices");
      }
      penalty_sum += penalty.measure.value(path[k]);
    }
  }
  return dynamics - penalty.lambda * dt * penalty_sum;
}

double penalized_log_magnitude(const PenalizedPathProblem& problem,
                               std::span<const CVector> path) {
  problem.validate();
  if (path.empty() || path.front().size() != problem.psi_i.dim() ||
      (path.front() - problem.psi_i.amplitudes()).cwiseAbs().maxCoeff() > kNormTolerance) {
    throw ValidationError("endpoint mismatch: path must start at psi_i");
  }
  if (problem.interior_normalization) {
    for (std::size_t k = 1; k + 1 < path.size(); ++k) {
      if (!is_normalized(path[k])) throw ValidationError("interior slice is not normalized");
    }
  }
  if (!path.empty() && !is_normalized(path.back())) {
    throw ValidationError("final slice is not normalized");
  }
  return penalized_log_magnitude(path, problem.h, problem.penalty, problem.grid);
}

PenalizedResult optimize_penalized(const PenalizedPathProblem& problem,
                                   const OptimizerConfig& cfg) {
  problem.validate();
  cfg.validate();

  const Index d = problem.psi_i.dim();
  const int n = problem.grid.steps();
  const double dt = problem.grid.dt();
  const double lambda = problem.penalty.lambda;
  const QuantumnessMeasure& measure = problem.penalty.measure;
  const SpectralDecomposition spectrum = spectral_decompose(problem.h);

  // Interaction picture: Phi_k = U(k dt) chi_k turns the slice coupling into
  // -|chi_{k+1} - chi_k|^2 / 2, so the Schroedinger path is chi_k = psi_i.
  std::vector<CMatrix> frames;
  frames.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) frames.push_back(propagator(spectrum, k * dt).matrix);
  auto constrained = [&](Index k) { return k == n || problem.interior_normalization; };

  CMatrix chi(d, n + 1);
  chi.col(0) = problem.psi_i.amplitudes();
  {
    const CVector target = random_state(d, cfg.seed).amplitudes();
    for (int k = 1; k <= n; ++k) {
      const double s = static_cast<double>(k) / n;
      chi.col(k) = (problem.psi_i.amplitudes() + kSeedTilt * s * target).normalized();
    }
  }

  auto objective = [&](const CMatrix& x) {
    double value = 0.0;
    for (Index k = 0; k < n; ++k) value -= 0.5 * (x.col(k + 1) - x.col(k)).squaredNorm();
    if (lambda > 0.0) {
      double q = 0.0;
      for (Index k = 1; k <= n; ++k) q += measure.value(frames[k] * x.col(k));
      value -= lambda * dt * q;
    }
    return value;
  };

  // Real-coordinate gradient (twice the Wirtinger derivative), tangent-projected
  // on constrained slices. Column 0 is pinned and stays zero.
  auto gradient = [&](const CMatrix& x) {
    CMatrix g = CMatrix::Zero(d, n + 1);
    for (Index k = 1; k <= n; ++k) {
      g.col(k) = (k < n ? CVector(x.col(k + 1) - x.col(k)) : CVector::Zero(d)) -
                 (x.col(k) - x.col(k - 1));
      if (lambda > 0.0) {
        g.col(k) -= 2.0 * lambda * dt *
                    (frames[k].adjoint() * measure.wirtinger_gradient(frames[k] * x.col(k)));
      }
      if (constrained(k)) g.col(k) = tangent_project(x.col(k), g.col(k));
    }
    return g;
  };

  std::vector<Eigen::MatrixXd> curvature(static_cast<std::size_t>(n),
                                         Eigen::MatrixXd::Zero(2 * d, 2 * d));

  double fx = objective(chi);
  int iterations = 0;
  bool converged = false;

  while (true) {
    const CMatrix g = gradient(chi);
    if (g.cwiseAbs().maxCoeff() <= cfg.grad_tol) {
      converged = true;
      break;
    }

    CMatrix direction = CMatrix::Zero(d, n + 1);
    if (lambda > 0.0) {
      for (Index k = 1; k <= n; ++k) {
        if (constrained(k)) {
          curvature[static_cast<std::size_t>(k - 1)] =
              penalty_curvature(measure, frames[k], chi.col(k), lambda * dt);
        }
      }
    }
    direction.rightCols(n) = solve_block_chain(g.rightCols(n), curvature);
    for (Index k = 1; k <= n; ++k) {
      if (constrained(k)) direction.col(k) = tangent_project(chi.col(k), direction.col(k));
    }
    // Predicted gain of a full step. Once it drops below the rounding level of
    // the objective (a sum of n slice terms) no step can register progress.
    const double decrement = 0.5 * g.cwiseProduct(direction.conjugate()).sum().real();
    const double resolution = static_cast<double>(n + 1) *
                              std::numeric_limits<double>::epsilon() * (1.0 + std::abs(fx));
    if (decrement <= resolution) {
      converged = true;
      break;
    }
    if (iterations >= cfg.max_iters) break;

    double step = cfg.step_size;
    bool accepted = false;
    for (int halving = 0; halving < kMaxHalvings; ++halving, step *= 0.5) {
      CMatrix trial = chi + step * direction;
      for (Index k = 1; k <= n; ++k) {
        if (constrained(k)) trial.col(k).normalize();
      }
      const double ftrial = objective(trial);
      if (ftrial > fx) {
        chi = std::move(trial);
        fx = ftrial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    ++iterations;
  }

  std::vector<CVector> path;
  path.reserve(static_cast<std::size_t>(n) + 1);
  path.push_back(problem.psi_i.amplitudes());
  for (Index k = 1; k <= n; ++k) path.push_back(frames[k] * chi.col(k));
  // Renormalize to remove rounding drift from the frame rotation.
  for (Index k = 1; k <= n; ++k) {
    if (constrained(k)) path[static_cast<std::size_t>(k)].normalize();
  }

  PenalizedReport report;
  report.iterations = iterations;
  report.converged = converged;
  report.q_trajectory.reserve(path.size());
  for (const auto& slice : path) {
    // Clamped: rounding can push 1 - |<p|psi>|^2 a few ulps below zero.
    report.q_trajectory.push_back(std::max(
        0.0, is_normalized(slice) ? measure.value(slice) : measure.value(slice.normalized())));
  }

  const CMatrix pointers = measure.pointer_basis() ? *measure.pointer_basis()
                                                   : CMatrix(CMatrix::Identity(d, d));
  const RVector fidelities = (pointers.adjoint() * path.back()).cwiseAbs2();
  report.fidelity_to_pointer = fidelities.maxCoeff(&report.nearest_pointer_index);
  for (Index k = 0; k < fidelities.size(); ++k) {
    if (fidelities(k) >= report.fidelity_to_pointer - kTieTol) report.pointer_ties.push_back(k);
  }
  if (report.pointer_ties.size() < 2) report.pointer_ties.clear();

  const double log_magnitude = penalized_log_magnitude(path, problem.h, problem.penalty,
                                                       problem.grid);
  return {StateVector::normalized(path.back()), std::move(path), log_magnitude,
          std::move(report)};
}

}  // namespace hpath
