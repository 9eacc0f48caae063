#pragma once

#include <optional>
#include <vector>

#include "hpath/hilbert.hpp"

namespace hpath {

/// Value of the generating functional Z(psi_i -> psi_e).
struct FunctionalValue {
  Complex z;
  std::optional<Complex> overlap;
  std::optional<std::vector<Complex>> mode_factors;
};

/// <psi_e| exp(-i H t / hbar) |psi_i>, with t the elapsed time t_e - t_i.
Complex overlap(const StateVector& psi_e, const Hamiltonian& h, const StateVector& psi_i,
                double t);

/// Z = exp(<psi_e|U(t)|psi_i> - 1). This is the production evaluation path.
FunctionalValue z_closed_form(const StateVector& psi_i, const StateVector& psi_e,
                              const Hamiltonian& h, double t);

/// Per-mode factor
///   Z_j = exp(-(|a_e|^2 + |a_i|^2)/2) * exp(exp(-i E_j t / hbar) conj(a_e) a_i).
Complex z_mode_factor(Complex a_i, Complex a_e, double energy, double t, double hbar);

/// Z as the product of per-mode factors over the energy eigenbasis in `s`.
/// Independent of z_closed_form; the two must agree to 1e-10.
FunctionalValue z_from_mode_product(const StateVector& psi_i, const StateVector& psi_e,
                                    const SpectralDecomposition& s, double t);

/// |Z - Z'| where Z' is evaluated after conjugating psi_i, psi_e and H by the
/// unitary `basis_change`. Throws ValidationError if `basis_change` is not
/// unitary within kUnitaryTolerance.
double basis_invariance_check(const StateVector& psi_i, const StateVector& psi_e,
                              const Hamiltonian& h, double t, const CMatrix& basis_change);

}  // namespace hpath
