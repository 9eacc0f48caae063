#include "hpath/functional.hpp"

#include <cmath>
#include <sstream>

namespace hpath {

Complex overlap(const StateVector& psi_e, const Hamiltonian& h, const StateVector& psi_i,
                double t) {
  require_same_dim(psi_e.dim(), psi_i.dim(), "overlap");
  require_same_dim(h.dim(), psi_i.dim(), "overlap");
  const UnitaryPropagator u = propagator(h, t);
  return psi_e.amplitudes().dot(u.matrix * psi_i.amplitudes());
}

FunctionalValue z_closed_form(const StateVector& psi_i, const StateVector& psi_e,
                              const Hamiltonian& h, double t) {
  const Complex ov = overlap(psi_e, h, psi_i, t);
  return {std::exp(ov - 1.0), ov, std::nullopt};
}

Complex z_mode_factor(Complex a_i, Complex a_e, double energy, double t, double hbar) {
  const double damping = -0.5 * (std::norm(a_e) + std::norm(a_i));
  const Complex cross = std::polar(1.0, -energy * t / hbar) * std::conj(a_e) * a_i;
  return std::exp(damping) * std::exp(cross);
}

FunctionalValue z_from_mode_product(const StateVector& psi_i, const StateVector& psi_e,
                                    const SpectralDecomposition& s, double t) {
  require_same_dim(psi_e.dim(), psi_i.dim(), "z_from_mode_product");
  const CVector a_i = to_energy_coefficients(psi_i, s);
  const CVector a_e = to_energy_coefficients(psi_e, s);

  std::vector<Complex> factors;
  factors.reserve(static_cast<std::size_t>(s.dim()));
  Complex product = 1.0;
  for (Index j = 0; j < s.dim(); ++j) {
    factors.push_back(z_mode_factor(a_i(j), a_e(j), s.energies(j), t, s.hbar));
    product *= factors.back();
  }
  return {product, std::nullopt, std::move(factors)};
}

double basis_invariance_check(const StateVector& psi_i, const StateVector& psi_e,
                              const Hamiltonian& h, double t, const CMatrix& basis_change) {
  require_same_dim(basis_change.rows(), h.dim(), "basis_invariance_check");
  const double defect = unitarity_defect(basis_change);
  if (defect > kUnitaryTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "basis change is not unitary: max |U^dagger U - I| = " << defect;
    throw ValidationError(msg.str());
  }

  const Complex z_original = z_closed_form(psi_i, psi_e, h, t).z;

  const CMatrix rotated = basis_change * h.matrix() * basis_change.adjoint();
  const Hamiltonian h_rotated(0.5 * (rotated + rotated.adjoint()), h.hbar());
  // Renormalize: the rotation is unitary only to kUnitaryTolerance.
  const StateVector i_rotated = StateVector::normalized(basis_change * psi_i.amplitudes());
  const StateVector e_rotated = StateVector::normalized(basis_change * psi_e.amplitudes());
  const Complex z_rotated = z_closed_form(i_rotated, e_rotated, h_rotated, t).z;

  return std::abs(z_original - z_rotated);
}

}  // namespace hpath
