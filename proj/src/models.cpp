#include "hpath/models.hpp"

#include <cmath>
#include <numbers>

namespace hpath {

QubitDetectorModel qubit_detector_model(Complex a0, Complex a1, double coupling, double hbar) {
  if (!(coupling > 0.0) || !std::isfinite(coupling)) {
    throw ValidationError("qubit-detector coupling must be positive");
  }
  CMatrix h = CMatrix::Zero(4, 4);
  h(2, 3) = coupling;
  h(3, 2) = coupling;

  CVector psi = CVector::Zero(4);
  psi(0) = a0;
  psi(2) = a1;
  return {Hamiltonian(std::move(h), hbar), StateVector::normalized(std::move(psi)),
          CMatrix::Identity(4, 4), std::numbers::pi * hbar / (2.0 * coupling)};
}

}  // namespace hpath
