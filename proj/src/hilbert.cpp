#include "hpath/hilbert.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "hpath/rng.hpp"

namespace hpath {

namespace {

bool all_finite(const CVector& v) {
  return std::all_of(v.data(), v.data() + v.size(),
                     [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

// Rotates v so that its first component above `floor` in magnitude is real positive.
void fix_phase(Eigen::Ref<CVector> v, double floor = 1e-8) {
  for (Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v(k));
    if (mag > floor) {
      v *= std::conj(v(k)) / mag;
      v(k) = Complex(mag, 0.0);
      return;
    }
  }
}

// Lexicographic "a > b" over (re, im) of the components in order.
bool lex_greater(const CVector& a, const CVector& b) {
  for (Index k = 0; k < a.size(); ++k) {
    if (a(k).real() != b(k).real()) return a(k).real() > b(k).real();
    if (a(k).imag() != b(k).imag()) return a(k).imag() > b(k).imag();
  }
  return false;
}

}  // namespace

StateVector StateVector::normalized(CVector amplitudes) {
  if (amplitudes.size() < 1) throw ValidationError("state vector must have dim >= 1");
  if (!all_finite(amplitudes)) throw ValidationError("state vector has non-finite amplitudes");
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw ValidationError("cannot normalize the zero vector");
  amplitudes /= norm;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::validated(CVector amplitudes, double tol) {
  if (amplitudes.size() < 1) throw ValidationError("state vector must have dim >= 1");
  if (!all_finite(amplitudes)) throw ValidationError("state vector has non-finite amplitudes");
  const double deviation = std::abs(amplitudes.squaredNorm() - 1.0);
  if (deviation > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "state vector is not normalized: |norm^2 - 1| = " << deviation << " > " << tol;
    throw ValidationError(msg.str());
  }
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(Index dim, Index k) {
  if (dim < 1 || k < 0 || k >= dim) throw ValidationError("basis index out of range");
  CVector v = CVector::Zero(dim);
  v(k) = 1.0;
  return StateVector(std::move(v));
}

Complex StateVector::inner(const StateVector& other) const {
  require_same_dim(dim(), other.dim(), "inner product");
  return amplitudes_.dot(other.amplitudes_);
}

double hermitian_asymmetry(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

Hamiltonian::Hamiltonian(CMatrix matrix, double hbar) : matrix_(std::move(matrix)), hbar_(hbar) {
  if (matrix_.rows() < 1 || matrix_.rows() != matrix_.cols()) {
    throw ValidationError("Hamiltonian must be a non-empty square matrix");
  }
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw ValidationError("hbar must be positive");
  const double scale = matrix_.cwiseAbs().maxCoeff();
  if (!std::isfinite(scale)) throw ValidationError("Hamiltonian has non-finite entries");
  const double asym = hermitian_asymmetry(matrix_);
  if (asym > 1e-12 * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Hamiltonian is not Hermitian: max |M_jk - conj(M_kj)| = " << asym
        << " exceeds 1e-12 * max|M| = " << 1e-12 * scale;
    throw ValidationError(msg.str());
  }
}

CMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * energies.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition spectral_decompose(const Hamiltonian& h) {
  // Symmetrize so the solver sees an exactly Hermitian matrix.
  const CMatrix hermitian = 0.5 * (h.matrix() + h.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw ValidationError("eigendecomposition failed");

  const Index n = h.dim();
  RVector raw_energies = solver.eigenvalues();
  CMatrix raw_vectors = solver.eigenvectors();
  for (Index j = 0; j < n; ++j) fix_phase(raw_vectors.col(j));

  const double degeneracy_tol = 1e-10 * (1.0 + raw_energies.cwiseAbs().maxCoeff());
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (std::abs(raw_energies(a) - raw_energies(b)) > degeneracy_tol) {
      return raw_energies(a) < raw_energies(b);
    }
    return lex_greater(raw_vectors.col(a), raw_vectors.col(b));
  });

  SpectralDecomposition s;
  s.energies.resize(n);
  s.eigenvectors.resize(n, n);
  s.hbar = h.hbar();
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    s.energies(j) = raw_energies(src);
    s.eigenvectors.col(j) = raw_vectors.col(src);
  }
  // Clustered energies may be out of order by less than degeneracy_tol.
  for (Index j = 1; j < n; ++j) s.energies(j) = std::max(s.energies(j), s.energies(j - 1));
  return s;
}

UnitaryPropagator propagator(const SpectralDecomposition& s, double t) {
  if (!std::isfinite(t)) throw ValidationError("propagation time must be finite");
  CVector phases(s.dim());
  for (Index j = 0; j < s.dim(); ++j) phases(j) = std::polar(1.0, -s.energies(j) * t / s.hbar);
  return {s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint(), t};
}

UnitaryPropagator propagator(const Hamiltonian& h, double t) {
  return propagator(spectral_decompose(h), t);
}

StateVector evolve(const UnitaryPropagator& u, const StateVector& psi) {
  require_same_dim(u.matrix.rows(), psi.dim(), "evolve");
  return StateVector::validated(u.matrix * psi.amplitudes());
}

StateVector evolve(const Hamiltonian& h, const StateVector& psi, double t) {
  require_same_dim(h.dim(), psi.dim(), "evolve");
  return evolve(propagator(h, t), psi);
}

CVector to_energy_coefficients(const StateVector& psi, const SpectralDecomposition& s) {
  require_same_dim(s.dim(), psi.dim(), "to_energy_coefficients");
  return s.eigenvectors.adjoint() * psi.amplitudes();
}

CVector from_energy_coefficients(const CVector& coefficients, const SpectralDecomposition& s) {
  require_same_dim(s.dim(), coefficients.size(), "from_energy_coefficients");
  return s.eigenvectors * coefficients;
}

StateVector random_state(Index dim, std::uint64_t seed) {
  if (dim < 1) throw ValidationError("random_state: dim must be >= 1");
  ComplexGaussianRng rng(seed, 0x5747);
  CVector v = rng.vector(dim);
  // A Gaussian draw is almost surely nonzero; fall back to e_0 for the null event.
  if (v.norm() == 0.0) v(0) = 1.0;
  return StateVector::normalized(std::move(v));
}

Hamiltonian random_hamiltonian(Index dim, std::uint64_t seed, double energy_scale, double hbar) {
  if (dim < 1) throw ValidationError("random_hamiltonian: dim must be >= 1");
  ComplexGaussianRng rng(seed, 0x4841);
  const CMatrix a = rng.matrix(dim, dim);
  CMatrix h = 0.5 * energy_scale * (a + a.adjoint());
  return Hamiltonian(std::move(h), hbar);
}

CMatrix random_unitary(Index dim, std::uint64_t seed) {
  if (dim < 1) throw ValidationError("random_unitary: dim must be >= 1");
  ComplexGaussianRng rng(seed, 0x5551);
  const CMatrix z = rng.matrix(dim, dim);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

}  // namespace hpath
