#pragma once

#include <cstdint>

#include "hpath/hilbert.hpp"

namespace hpath {

struct OptimizerConfig {
  double step_size = 1.0;
  int max_iters = 1000;
  double grad_tol = 1e-9;
  std::uint64_t seed = 0;

  void validate() const;
};

struct OptimizationResult {
  StateVector argmax_state;
  double objective;
  int iterations;
  bool converged;
  double fidelity_vs_schrodinger;
};

/// |Z(psi_i -> psi_e)| = exp(Re<psi_e|U psi_i> - 1).
double objective(const StateVector& psi_e, const Hamiltonian& h, const StateVector& psi_i,
                 double t);

/// Wirtinger derivative of the objective with respect to conj(psi_e):
/// exp(Re<psi_e|U psi_i> - 1) * U psi_i / 2.
CVector euclidean_gradient(const StateVector& psi_e, const Hamiltonian& h,
                           const StateVector& psi_i, double t);

/// Component of `direction` tangent to the unit sphere at `point`, under the
/// real inner product Re<a, b>.
CVector tangent_project(const CVector& point, const CVector& direction);

/// The objective with the evolved initial state cached. Accepts arbitrary
/// (possibly unnormalized) vectors so it can be probed by finite differences.
class FinalStateObjective {
 public:
  FinalStateObjective(const Hamiltonian& h, const StateVector& psi_i, double t);

  double value(const CVector& psi_e) const;
  /// Same as value() for unit psi_e, evaluated through |psi_e - U psi_i|^2 so
  /// that differences near the maximum are not lost to rounding.
  double value_on_sphere(const CVector& psi_e) const;
  CVector wirtinger_gradient(const CVector& psi_e) const;
  const CVector& evolved_initial() const { return evolved_; }

 private:
  CVector evolved_;
};

/// Projected-gradient ascent of |Z| over the unit sphere from a seeded random
/// start. Each step moves along the tangent gradient and renormalizes; the
/// step halves until the objective does not decrease. Converged when the
/// max-norm of the tangent gradient is at most cfg.grad_tol. Running out of
/// iterations is reported through `converged`, not thrown.
OptimizationResult maximize_final_state(const Hamiltonian& h, const StateVector& psi_i, double t,
                                        const OptimizerConfig& cfg);

}  // namespace hpath
