#pragma once

#include "hpath/hilbert.hpp"

namespace hpath {

/// Qubit S coupled to a two-level detector D, basis index 2 * s + d.
///
/// H = g |1><1|_S (x) sigma_x^D flips the detector iff the qubit is in |1>.
/// The detector starts in |0>, so psi_i = (a_0|0> + a_1|1>) (x) |0>. After
/// measurement_time = pi hbar / (2 g) the Schroedinger state is
/// a_0|00> - i a_1|11>, a superposition of pointer states.
struct QubitDetectorModel {
  Hamiltonian h;
  StateVector psi_i;
  CMatrix pointer_basis;  // product basis |s d>, columns in index order
  double measurement_time;
};

QubitDetectorModel qubit_detector_model(Complex a0, Complex a1, double coupling = 1.0,
                                        double hbar = 1.0);

}  // namespace hpath
