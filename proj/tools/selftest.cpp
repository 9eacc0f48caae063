#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "hpath/functional.hpp"
#include "hpath/lattice.hpp"
#include "hpath/optimizer.hpp"
#include "hpath/quantumness.hpp"

namespace hpath::cli {

namespace {

struct Check {
  std::string name;
  std::function<double()> error;  // absolute deviation from the expected value
  double tol;
};

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

StateVector plus_state() {
  CVector v(2);
  v << 1.0, 1.0;
  return StateVector::normalized(v);
}

std::vector<Check> functional_checks() {
  const double e = 1.3;
  const Hamiltonian h(diag2(0.0, e));
  const double t_pi = std::numbers::pi / e;
  const StateVector psi = plus_state();
  return {
      {"spectral_decompose diagonal",
       [=] {
         const auto s = spectral_decompose(h);
         return std::max((s.energies - RVector::LinSpaced(2, 0.0, e)).cwiseAbs().maxCoeff(),
                         (s.eigenvectors - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff());
       },
       1e-14},
      {"propagator t=0 is identity",
       [=] { return (propagator(h, 0.0).matrix - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(); },
       1e-15},
      {"evolve relative phase pi",
       [=] {
         CVector want(2);
         want << 1.0, -1.0;
         return (evolve(h, psi, t_pi).amplitudes() - want / std::sqrt(2.0)).cwiseAbs().maxCoeff();
       },
       1e-14},
      {"overlap with evolved state is 1",
       [=] { return std::abs(overlap(evolve(h, psi, 0.7), h, psi, 0.7) - 1.0); },
       1e-14},
      {"overlap of (1,1)/sqrt2 at Et/hbar=pi is 0",
       [=] { return std::abs(overlap(psi, h, psi, t_pi)); },
       1e-14},
      {"z at overlap 1 is 1",
       [=] { return std::abs(z_closed_form(psi, evolve(h, psi, 0.7), h, 0.7).z - 1.0); },
       1e-14},
      {"z at overlap 0 is 1/e",
       [=] { return std::abs(z_closed_form(psi, psi, h, t_pi).z - std::exp(-1.0)); },
       1e-14},
      {"z at antipode is 1/e^2",
       [=] {
         const StateVector anti = StateVector::normalized(-evolve(h, psi, 0.7).amplitudes());
         return std::abs(std::abs(z_closed_form(psi, anti, h, 0.7).z) - std::exp(-2.0));
       },
       1e-14},
      {"mode factor a=1, E=0 is 1",
       [] { return std::abs(z_mode_factor(1.0, 1.0, 0.0, 2.0, 1.0) - 1.0); },
       1e-15},
      {"mode factor a_i=0",
       [] {
         const Complex a_e(0.3, -0.4);
         return std::abs(z_mode_factor(0.0, a_e, 1.0, 2.0, 1.0) - std::exp(-0.5 * std::norm(a_e)));
       },
       1e-15},
      {"mode product dim 1 equals closed form",
       [] {
         const Hamiltonian h1(CMatrix::Constant(1, 1, 0.8));
         CVector a(1), b(1);
         a << Complex(0.6, 0.8);
         b << Complex(0.0, 1.0);
         const auto psi_i = StateVector::normalized(a);
         const auto psi_e = StateVector::normalized(b);
         return std::abs(z_from_mode_product(psi_i, psi_e, spectral_decompose(h1), 1.1).z -
                         z_closed_form(psi_i, psi_e, h1, 1.1).z);
       },
       1e-15},
      {"basis invariance under identity",
       [=] { return basis_invariance_check(psi, psi, h, 0.4, CMatrix::Identity(2, 2)); },
       1e-15},
  };
}

std::vector<Check> lattice_checks() {
  const TimeGrid grid(0.0, 1.5, 6);
  const Complex z(0.4, -0.3);
  return {
      {"action of constant path, E=0",
       [=] { return std::abs(discrete_action(PathLattice::constant(grid, z), 0.0, 1.0).value); },
       1e-15},
      {"action of constant path, E!=0",
       [=] {
         const double e = 0.9;
         const Complex want = -Complex(0.0, 1.0) * double(grid.steps()) * grid.dt() * e * std::norm(z);
         return std::abs(discrete_action(PathLattice::constant(grid, z), e, 1.0).value - want);
       },
       1e-14},
      {"chain with E=0 is the overlap <zf|z0>",
       [=] {
         const CoherentChainProblem p{z, Complex(0.1, 0.2), 0.0, grid, 1.0};
         const Complex want = std::exp(-0.5 * (std::norm(p.zf) + std::norm(p.z0)) +
                                       std::conj(p.zf) * p.z0);
         return std::abs(chain_reduce_exact(p) - want);
       },
       1e-15},
      {"chain with N=1 is the boundary term",
       [=] {
         const CoherentChainProblem p{z, Complex(0.1, 0.2), 0.7, grid.with_steps(1), 1.0};
         const Complex c = 1.0 - Complex(0.0, 1.0) * p.energy * p.grid.dt() / p.hbar;
         const Complex want = std::exp(-0.5 * (std::norm(p.zf) + std::norm(p.z0)) +
                                       c * std::conj(p.zf) * p.z0);
         return std::abs(chain_reduce_exact(p) - want);
       },
       1e-15},
      {"propagator with zero phase is <zf|z0>",
       [=] {
         const CoherentChainProblem p{z, Complex(0.1, 0.2), 0.0, grid, 1.0};
         const Complex want = std::exp(-0.5 * (std::norm(p.zf) + std::norm(p.z0)) +
                                       std::conj(p.zf) * p.z0);
         return std::abs(analytic_propagator(p) - want);
       },
       1e-15},
      {"propagator with z0=0",
       [=] {
         const CoherentChainProblem p{0.0, z, 0.7, grid, 1.0};
         return std::abs(analytic_propagator(p) - std::exp(-0.5 * std::norm(z)));
       },
       1e-15},
      {"convergence with E=0 is exact",
       [=] {
         const CoherentChainProblem p{z, z, 0.0, grid, 1.0};
         const int steps[] = {1, 10, 100};
         double worst = 0.0;
         for (const auto& row : convergence_study(p, steps)) worst = std::max(worst, row.abs_error);
         return worst;
       },
       1e-14},
      {"Monte Carlo with N=1 is exact",
       [=] {
         const CoherentChainProblem p{z, Complex(0.1, 0.2), 0.7, grid.with_steps(1), 1.0};
         const auto mc = monte_carlo_estimate(p, 1000, 1);
         return std::abs(mc.estimate - chain_reduce_exact(p)) + mc.standard_error;
       },
       1e-15},
  };
}

std::vector<Check> optimizer_checks() {
  const Hamiltonian h(diag2(0.0, 1.3));
  const StateVector psi = plus_state();
  const double t = 0.8;
  const StateVector evolved = evolve(h, psi, t);
  return {
      {"objective at evolved state is 1", [=] { return std::abs(objective(evolved, h, psi, t) - 1.0); },
       1e-14},
      {"objective at orthogonal state is 1/e",
       [=] {
         CVector v(2);
         v << -std::conj(evolved[1]), std::conj(evolved[0]);
         return std::abs(objective(StateVector::normalized(v), h, psi, t) - std::exp(-1.0));
       },
       1e-14},
      {"objective at antipode is 1/e^2",
       [=] {
         const auto anti = StateVector::normalized(-evolved.amplitudes());
         return std::abs(objective(anti, h, psi, t) - std::exp(-2.0));
       },
       1e-14},
      {"tangent gradient vanishes at evolved state",
       [=] {
         return tangent_project(evolved.amplitudes(), euclidean_gradient(evolved, h, psi, t))
             .cwiseAbs()
             .maxCoeff();
       },
       1e-15},
      {"gradient pulls toward U psi_i when H=0",
       [] {
         const Hamiltonian zero(CMatrix::Zero(2, 2));
         const CVector g =
             euclidean_gradient(StateVector::basis(2, 1), zero, StateVector::basis(2, 0), 1.0);
         return std::abs(g(1)) + std::abs(std::arg(g(0)));
       },
       1e-15},
      {"dim 1 maximizer is the evolved phase",
       [] {
         const Hamiltonian h1(CMatrix::Constant(1, 1, 0.6));
         const auto psi1 = StateVector::basis(1, 0);
         const auto r = maximize_final_state(h1, psi1, 2.0, OptimizerConfig{});
         return std::abs(r.argmax_state[0] - std::exp(Complex(0.0, -1.2))) + (r.converged ? 0.0 : 1.0);
       },
       1e-9},
      {"dim 2 maximizer at Et/hbar=pi",
       [=] {
         const auto r = maximize_final_state(h, psi, std::numbers::pi / 1.3, OptimizerConfig{});
         CVector want(2);
         want << 1.0, -1.0;
         return (r.argmax_state.amplitudes() - want / std::sqrt(2.0)).cwiseAbs().maxCoeff() +
                std::abs(r.objective - 1.0) + (r.converged ? 0.0 : 1.0);
       },
       1e-8},
  };
}

std::vector<Check> quantumness_checks() {
  const CMatrix identity2 = CMatrix::Identity(2, 2);
  return {
      {"pointer deviation of a pointer state",
       [=] { return std::abs(q_pointer_deviation(StateVector::basis(2, 0), identity2)); }, 1e-15},
      {"pointer deviation of equal superposition",
       [] {
         const CVector v = CVector::Ones(4);
         return std::abs(q_pointer_deviation(StateVector::normalized(v), CMatrix::Identity(4, 4)) -
                         0.75);
       },
       1e-15},
      {"pointer deviation of (sqrt .9, sqrt .1)",
       [=] {
         CVector v(2);
         v << std::sqrt(0.9), std::sqrt(0.1);
         return std::abs(q_pointer_deviation(StateVector::normalized(v), identity2) - 0.1);
       },
       1e-15},
      {"linear entropy of a product state",
       [] {
         CVector a(2), b(2);
         a << 0.6, Complex(0.0, 0.8);
         b << Complex(0.28, 0.96), 0.0;
         b = (b + CVector::Ones(2)).normalized();
         CVector prod(4);
         for (int i = 0; i < 2; ++i)
           for (int j = 0; j < 2; ++j) prod(2 * i + j) = a(i) * b(j);
         return std::abs(q_linear_entropy(StateVector::normalized(prod), 2, 2));
       },
       1e-15},
      {"linear entropy of a Bell state",
       [] {
         CVector v = CVector::Zero(4);
         v(0) = v(3) = 1.0;
         return std::abs(q_linear_entropy(StateVector::normalized(v), 2, 2) - 0.5);
       },
       1e-15},
      {"log magnitude of constant path, H=0, lambda=0",
       [] {
         const TimeGrid grid(0.0, 1.0, 8);
         const Hamiltonian zero(CMatrix::Zero(2, 2));
         const std::vector<CVector> path(9, plus_state().amplitudes());
         const PenaltyConfig pen{0.0, QuantumnessMeasure::pointer_deviation(CMatrix::Identity(2, 2))};
         return std::abs(penalized_log_magnitude(path, zero, pen, grid));
       },
       0.0},
      {"penalty of a path resting in a pointer state",
       [] {
         const TimeGrid grid(0.0, 1.0, 8);
         const Hamiltonian zero(CMatrix::Zero(2, 2));
         const std::vector<CVector> path(9, StateVector::basis(2, 1).amplitudes());
         const PenaltyConfig pen{5.0, QuantumnessMeasure::pointer_deviation(CMatrix::Identity(2, 2))};
         return std::abs(penalized_log_magnitude(path, zero, pen, grid));
       },
       0.0},
      {"H=0 with a pointer initial state stays put",
       [] {
         const PenalizedPathProblem p{
             StateVector::basis(2, 1), TimeGrid(0.0, 1.0, 20), Hamiltonian(CMatrix::Zero(2, 2)),
             {5.0, QuantumnessMeasure::pointer_deviation(CMatrix::Identity(2, 2))}, true};
         const auto r = optimize_penalized(p, OptimizerConfig{});
         return (1.0 - std::norm(r.final_state[1])) + std::abs(r.log_magnitude) +
                (r.report.converged ? 0.0 : 1.0);
       },
       1e-12},
  };
}

}  // namespace

int selftest(const std::string& command, std::ostream& out) {
  std::vector<Check> checks;
  if (command == "zeval") {
    checks = functional_checks();
  } else if (command == "lattice") {
    checks = lattice_checks();
  } else if (command == "optimize") {
    checks = optimizer_checks();
  } else if (command == "collapse") {
    checks = quantumness_checks();
  } else {
    out << "FAIL unknown command " << command << "\n";
    return kExitFailure;
  }

  int failures = 0;
  for (const auto& c : checks) {
    double err = 0.0;
    std::string detail;
    try {
      err = c.error();
    } catch (const std::exception& e) {
      err = std::numeric_limits<double>::infinity();
      detail = e.what();
    }
    const bool ok = err <= c.tol;
    if (!ok) ++failures;
    out << (ok ? "ok   " : "FAIL ") << c.name;
    if (!ok) {
      out << " (deviation " << io::format_double(err) << ", tolerance " << io::format_double(c.tol);
      if (!detail.empty()) out << ", " << detail;
      out << ")";
    }
    out << "\n";
  }
  out << checks.size() - static_cast<std::size_t>(failures) << "/" << checks.size() << " passed\n";
  return failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace hpath::cli
