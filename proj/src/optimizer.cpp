#include "hpath/optimizer.hpp"

#include <cmath>

namespace hpath {

namespace {

constexpr int kMaxHalvings = 60;

}  // namespace

void OptimizerConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw ValidationError("optimizer step_size must be positive");
  }
  if (max_iters < 1) throw ValidationError("optimizer max_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw ValidationError("optimizer grad_tol must be positive");
}

FinalStateObjective::FinalStateObjective(const Hamiltonian& h, const StateVector& psi_i, double t)
    : evolved_(propagator(h, t).matrix * psi_i.amplitudes()) {
  require_same_dim(h.dim(), psi_i.dim(), "FinalStateObjective");
}

double FinalStateObjective::value(const CVector& psi_e) const {
  return std::exp(psi_e.dot(evolved_).real() - 1.0);
}

double FinalStateObjective::value_on_sphere(const CVector& psi_e) const {
  // Re<x,v> - 1 = -|x - v|^2 / 2 + (|v|^2 - 1) / 2 when |x| = 1.
  return std::exp(-0.5 * (psi_e - evolved_).squaredNorm() + 0.5 * (evolved_.squaredNorm() - 1.0));
}

CVector FinalStateObjective::wirtinger_gradient(const CVector& psi_e) const {
  return 0.5 * value(psi_e) * evolved_;
}

double objective(const StateVector& psi_e, const Hamiltonian& h, const StateVector& psi_i,
                 double t) {
  require_same_dim(psi_e.dim(), psi_i.dim(), "objective");
  return FinalStateObjective(h, psi_i, t).value(psi_e.amplitudes());
}

CVector euclidean_gradient(const StateVector& psi_e, const Hamiltonian& h,
                           const StateVector& psi_i, double t) {
  require_same_dim(psi_e.dim(), psi_i.dim(), "euclidean_gradient");
  return FinalStateObjective(h, psi_i, t).wirtinger_gradient(psi_e.amplitudes());
}

CVector tangent_project(const CVector& point, const CVector& direction) {
  require_same_dim(point.size(), direction.size(), "tangent_project");
  return direction - point.dot(direction).real() * point;
}

OptimizationResult maximize_final_state(const Hamiltonian& h, const StateVector& psi_i, double t,
                                        const OptimizerConfig& cfg) {
  cfg.validate();
  require_same_dim(h.dim(), psi_i.dim(), "maximize_final_state");
  const FinalStateObjective f(h, psi_i, t);

  CVector x = random_state(psi_i.dim(), cfg.seed).amplitudes();
  double fx = f.value_on_sphere(x);
  int iterations = 0;
  bool converged = false;

  while (true) {
    // Real-coordinate gradient is twice the Wirtinger derivative.
    const CVector ascent = tangent_project(x, 2.0 * f.wirtinger_gradient(x));
    if (ascent.cwiseAbs().maxCoeff() <= cfg.grad_tol) {
      converged = true;
      break;
    }
    if (iterations >= cfg.max_iters) break;

    double step = cfg.step_size;
    bool accepted = false;
    for (int halving = 0; halving < kMaxHalvings; ++halving, step *= 0.5) {
      CVector trial = x + step * ascent;
      trial.normalize();
      const double ftrial = f.value_on_sphere(trial);
      if (ftrial >= fx) {
        x = std::move(trial);
        fx = ftrial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    ++iterations;
  }

  StateVector argmax = StateVector::normalized(x);
  const double value = f.value_on_sphere(argmax.amplitudes());
  const double fidelity = std::norm(argmax.amplitudes().dot(f.evolved_initial()));
  return {std::move(argmax), value, iterations, converged, fidelity};
}

}  // namespace hpath
