#pragma once

#include <cstdint>

#include "hpath/types.hpp"

namespace hpath {

/// Normalized complex amplitude vector. Every instance satisfies
/// |sum_k |a_k|^2 - 1| <= kNormTolerance.
class StateVector {
 public:
  /// Scales `amplitudes` to unit norm. Rejects empty, zero or non-finite input.
  static StateVector normalized(CVector amplitudes);

  /// Accepts `amplitudes` only if already normalized within `tol`.
  static StateVector validated(CVector amplitudes, double tol = kNormTolerance);

  /// Unit vector e_k.
  static StateVector basis(Index dim, Index k);

  const CVector& amplitudes() const { return amplitudes_; }
  Index dim() const { return amplitudes_.size(); }
  Complex operator[](Index k) const { return amplitudes_(k); }

  /// <this|other>
  Complex inner(const StateVector& other) const;

 private:
  explicit StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {}
  CVector amplitudes_;
};

/// Hermitian operator with an explicit reduced Planck constant.
class Hamiltonian {
 public:
  explicit Hamiltonian(CMatrix matrix, double hbar = 1.0);

  const CMatrix& matrix() const { return matrix_; }
  double hbar() const { return hbar_; }
  Index dim() const { return matrix_.rows(); }

 private:
  CMatrix matrix_;
  double hbar_;
};

/// Largest |M_jk - conj(M_kj)|.
double hermitian_asymmetry(const CMatrix& m);

/// Largest |(U^dagger U - I)_jk|.
double unitarity_defect(const CMatrix& u);

/// Energies ascending; columns of `eigenvectors` are the matching |E_j>.
struct SpectralDecomposition {
  RVector energies;
  CMatrix eigenvectors;
  double hbar = 1.0;

  Index dim() const { return energies.size(); }
  CMatrix reconstruct() const;
};

/// Dense Hermitian eigendecomposition.
///
/// Ordering is deterministic: energies ascend, eigenvalues within a
/// degeneracy cluster are ordered by lexicographically descending eigenvector
/// components, and each eigenvector's first non-negligible component is made
/// real and positive. Inside a degenerate cluster any orthonormal basis is
/// valid; compare projectors, not columns.
SpectralDecomposition spectral_decompose(const Hamiltonian& h);

struct UnitaryPropagator {
  CMatrix matrix;
  double duration = 0.0;
};

/// exp(-i H t / hbar) built from the eigendecomposition.
UnitaryPropagator propagator(const SpectralDecomposition& s, double t);
UnitaryPropagator propagator(const Hamiltonian& h, double t);

StateVector evolve(const Hamiltonian& h, const StateVector& psi, double t);
StateVector evolve(const UnitaryPropagator& u, const StateVector& psi);

/// a_j = <E_j|psi>.
CVector to_energy_coefficients(const StateVector& psi, const SpectralDecomposition& s);

/// Inverse of to_energy_coefficients: sum_j a_j |E_j>.
CVector from_energy_coefficients(const CVector& coefficients, const SpectralDecomposition& s);

// Seeded generators. Output is a pure function of the arguments.
StateVector random_state(Index dim, std::uint64_t seed);
Hamiltonian random_hamiltonian(Index dim, std::uint64_t seed, double energy_scale = 1.0,
                               double hbar = 1.0);
/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
CMatrix random_unitary(Index dim, std::uint64_t seed);

}  // namespace hpath
