#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hpath/hilbert.hpp"
#include "hpath/lattice.hpp"
#include "hpath/optimizer.hpp"

namespace hpath {

enum class QuantumnessKind { pointer_deviation, linear_entropy };

/// Nonnegative functional Q on normalized states that vanishes on a
/// designated classical set.
///   pointer_deviation: Q = 1 - max_k |<p_k|psi>|^2, zero on pointer states.
///   linear_entropy:    Q = 1 - Tr(rho_A^2), zero on product states of d_A x d_B.
class QuantumnessMeasure {
 public:
  /// Columns of `pointer_basis` are the pointer states; they must be
  /// orthonormal within 1e-10. An incomplete set is allowed.
  static QuantumnessMeasure pointer_deviation(CMatrix pointer_basis);
  static QuantumnessMeasure linear_entropy(Index d_a, Index d_b);

  QuantumnessKind kind() const { return kind_; }
  const std::optional<CMatrix>& pointer_basis() const { return pointer_basis_; }
  const std::optional<std::pair<Index, Index>>& partition() const { return partition_; }
  Index dim() const;

  /// Raw formula value; may sit a few ulps below zero on normalized input.
  double value(const CVector& psi) const;
  /// dQ / d conj(psi), treating Q's formula as a function on all of C^d.
  CVector wirtinger_gradient(const CVector& psi) const;
  /// Directional derivative of wirtinger_gradient at psi along v. Real-linear
  /// in v, not complex-linear in general. The pointer branch holds the nearest
  /// pointer fixed.
  CVector gradient_derivative(const CVector& psi, const CVector& v) const;

 private:
  QuantumnessMeasure() = default;
  QuantumnessKind kind_ = QuantumnessKind::pointer_deviation;
  std::optional<CMatrix> pointer_basis_;
  std::optional<std::pair<Index, Index>> partition_;
};

double q_pointer_deviation(const StateVector& psi, const CMatrix& pointer_basis);
double q_linear_entropy(const StateVector& psi, Index d_a, Index d_b);

struct PenaltyConfig {
  double lambda = 0.0;  // rate, units of 1/time
  QuantumnessMeasure measure;
};

struct PenalizedPathProblem {
  StateVector psi_i;
  TimeGrid grid;
  Hamiltonian h;
  PenaltyConfig penalty;
  /// Keep interior slices on the unit sphere. Turning this off is only
  /// permitted with lambda = 0, since Q is defined on normalized states.
  bool interior_normalization = true;

  void validate() const;
};

/// Log-magnitude of one discretized path's weight in the penalized functional
///
///   sum_{k<N} ( Re<Phi_{k+1}| U(dt) |Phi_k> - (|Phi_k|^2 + |Phi_{k+1}|^2)/2 )
///     - lambda * dt * sum_{k=1..N} Q(Phi_k),
///
/// i.e. the product of one-slice closed-form generating functionals along the
/// path, damped by the quantumness penalty. The dynamical part equals
/// -|Phi_{k+1} - U(dt) Phi_k|^2 / 2 per slice, so it is zero exactly on the
/// Schroedinger path and negative elsewhere. `path` holds Phi_0 ... Phi_N.
/// This is the stationary-path approximation; it is not an exact evaluation
/// of the penalized path integral.
double penalized_log_magnitude(std::span<const CVector> path, const Hamiltonian& h,
                               const PenaltyConfig& penalty, const TimeGrid& grid);

/// Same, additionally checking that path[0] is psi_i and, when requested,
/// that interior slices are normalized.
double penalized_log_magnitude(const PenalizedPathProblem& problem,
                               std::span<const CVector> path);

struct PenalizedReport {
  std::vector<double> q_trajectory;  // Q(Phi_k), k = 0 ... N
  Index nearest_pointer_index = 0;
  double fidelity_to_pointer = 0.0;
  /// Pointer indices whose fidelity with the final state ties the maximum
  /// within 1e-9. Empty when the nearest pointer state is unique.
  std::vector<Index> pointer_ties;
  int iterations = 0;
  bool converged = false;
};

struct PenalizedResult {
  StateVector final_state;
  std::vector<CVector> path;  // Phi_0 ... Phi_N
  double log_magnitude;
  PenalizedReport report;
};

/// Jointly ascends penalized_log_magnitude over the interior slices and the
/// final state. The path starts at the Schroedinger path tilted slightly toward
/// a seeded random state. Each step solves a block-tridiagonal Newton-like
/// system (slice coupling plus the clipped Riemannian curvature of the
/// penalty), then renormalizes slices under a halving line search.
///
/// Converged when the max-norm of the tangent gradient is at most grad_tol, or
/// when the predicted gain of a full step falls below the rounding level of
/// the objective.
///
/// The nearest pointer state is taken from the measure's pointer basis, or the
/// standard basis when the measure has none.
PenalizedResult optimize_penalized(const PenalizedPathProblem& problem,
                                   const OptimizerConfig& cfg);

}  // namespace hpath
