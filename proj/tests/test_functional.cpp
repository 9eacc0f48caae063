#include <gtest/gtest.h>

#include <numbers>

#include "hpath/functional.hpp"
#include "oracles.hpp"

using namespace hpath;

namespace {

constexpr Complex kI(0.0, 1.0);

CVector vec(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Index>(xs.size()));
  Index k = 0;
  for (Complex x : xs) v(k++) = x;
  return v;
}

Hamiltonian diag_h(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return Hamiltonian(m);
}

StateVector orthogonal_to(const StateVector& u, std::uint64_t seed) {
  CVector r = random_state(u.dim(), seed).amplitudes();
  r -= u.amplitudes().dot(r) * u.amplitudes();
  r -= u.amplitudes().dot(r) * u.amplitudes();
  return StateVector::normalized(r);
}

}  // namespace

TEST(Overlap, Examples) {
  const Hamiltonian h = random_hamiltonian(5, 1);
  const auto psi = random_state(5, 2);
  const auto evolved = evolve(h, psi, 0.9);
  EXPECT_LE(std::abs(overlap(evolved, h, psi, 0.9) - 1.0), 1e-14);
  EXPECT_LE(std::abs(overlap(orthogonal_to(evolved, 3), h, psi, 0.9)), 1e-14);

  const double e = 2.0;
  const auto plus = StateVector::normalized(vec({1.0, 1.0}));
  EXPECT_LE(std::abs(overlap(plus, diag_h(0.0, e), plus, std::numbers::pi / e)), 1e-15);
  EXPECT_THROW(overlap(random_state(4, 1), h, psi, 1.0), ValidationError);
}

TEST(Overlap, MatchesHighPrecisionReference) {
  // Reference computed at 40 digits from the matrix exponential series.
  CMatrix m(3, 3);
  m << 1.0, Complex(0.5, -0.2), 0.0,
       Complex(0.5, 0.2), -0.3, Complex(0.0, 0.1),
       0.0, Complex(0.0, -0.1), 0.7;
  const Hamiltonian h(m, 0.8);
  const auto psi_i = StateVector::normalized(vec({1.0, kI, 0.5}));
  const auto psi_e = StateVector::normalized(vec({0.2, 1.0, -kI}));
  const Complex ov = overlap(psi_e, h, psi_i, 1.3);
  EXPECT_NEAR(ov.real(), -0.024016591625473676649, 1e-13);
  EXPECT_NEAR(ov.imag(), -0.060846159957935617198, 1e-13);
  const auto z = z_closed_form(psi_i, psi_e, h, 1.3);
  EXPECT_NEAR(z.z.real(), 0.35848485597951014316, 1e-13);
  EXPECT_NEAR(z.z.imag(), -0.021839385202911455642, 1e-13);
  const CMatrix u = propagator(h, 1.3).matrix;
  EXPECT_NEAR(u(0, 0).real(), -0.23928556679506833677, 1e-13);
  EXPECT_NEAR(u(0, 0).imag(), -0.74301754153782354265, 1e-13);
  EXPECT_NEAR(u(1, 2).real(), 0.12057741039317546691, 1e-13);
  EXPECT_NEAR(u(1, 2).imag(), -0.038346333993430994752, 1e-13);
}

TEST(ZClosedForm, Examples) {
  const Hamiltonian h = random_hamiltonian(3, 5);
  const auto psi = random_state(3, 6);
  const auto evolved = evolve(h, psi, 1.1);

  const auto at_one = z_closed_form(psi, evolved, h, 1.1);
  EXPECT_LE(std::abs(at_one.z - 1.0), 1e-14);
  ASSERT_TRUE(at_one.overlap.has_value());
  EXPECT_LE(std::abs(at_one.z - std::exp(*at_one.overlap - 1.0)), 1e-15);

  EXPECT_NEAR(std::abs(z_closed_form(psi, orthogonal_to(evolved, 1), h, 1.1).z), 0.36787944117144233,
              1e-14);
  const auto anti = StateVector::normalized(-evolved.amplitudes());
  EXPECT_NEAR(std::abs(z_closed_form(psi, anti, h, 1.1).z), 0.1353352832366127, 1e-14);
}

TEST(ZClosedForm, UnnormalizedInputIsRejectedAtTheBoundary) {
  EXPECT_THROW(StateVector::validated(vec({1.0, 0.1})), ValidationError);
}

TEST(ZClosedForm, BoundsOverRandomInstances) {
  const double lower = std::exp(-2.0) - 1e-12, upper = 1.0 + 1e-12;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const Index dim = 1 + static_cast<Index>(seed % 16);
    const Hamiltonian h = random_hamiltonian(dim, seed, 3.0);
    const auto psi_i = random_state(dim, 3 * seed + 1);
    const auto psi_e = random_state(dim, 3 * seed + 2);
    const double t = 0.01 * static_cast<double>(seed) - 5.0;
    const auto z = z_closed_form(psi_i, psi_e, h, t);
    ASSERT_GE(std::abs(z.z), lower) << seed;
    ASSERT_LE(std::abs(z.z), upper) << seed;
    ASSERT_LE(std::abs(z.z - std::exp(*z.overlap - 1.0)), 1e-12);
  }
}

TEST(ZModeFactor, Examples) {
  EXPECT_LE(std::abs(z_mode_factor(1.0, 1.0, 0.0, 3.0, 1.0) - 1.0), 1e-15);
  const Complex a_e(-0.2, 0.7);
  EXPECT_LE(std::abs(z_mode_factor(0.0, a_e, 2.0, 3.0, 1.0) - std::exp(-0.5 * std::norm(a_e))),
            1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_LE(std::abs(z_mode_factor(r, r, 1.0, std::numbers::pi, 1.0) - std::exp(-1.0)), 1e-15);
  // hbar enters as E t / hbar.
  EXPECT_LE(std::abs(z_mode_factor(r, r, 2.0, std::numbers::pi, 2.0) - std::exp(-1.0)), 1e-15);
}

TEST(ZFromModeProduct, Examples) {
  const Hamiltonian h1(CMatrix::Constant(1, 1, -0.4));
  const auto a = StateVector::normalized(vec({Complex(0.6, 0.8)}));
  const auto b = StateVector::normalized(vec({kI}));
  const auto s1 = spectral_decompose(h1);
  EXPECT_LE(std::abs(z_from_mode_product(a, b, s1, 0.5).z - z_closed_form(a, b, h1, 0.5).z), 1e-15);

  const double e = 1.5;
  const auto plus = StateVector::normalized(vec({1.0, 1.0}));
  const Hamiltonian hd = diag_h(0.0, e);
  const auto prod = z_from_mode_product(plus, plus, spectral_decompose(hd), std::numbers::pi / e);
  EXPECT_LE(std::abs(prod.z - std::exp(-1.0)), 1e-15);
  ASSERT_TRUE(prod.mode_factors.has_value());
  EXPECT_EQ(prod.mode_factors->size(), 2u);
  EXPECT_LE(std::abs(prod.z - z_closed_form(plus, plus, hd, std::numbers::pi / e).z), 1e-15);

  const Hamiltonian h8 = random_hamiltonian(8, 13);
  const auto p = random_state(8, 14), q = random_state(8, 15);
  EXPECT_LE(std::abs(z_from_mode_product(p, q, spectral_decompose(h8), 0.8).z -
                     z_closed_form(p, q, h8, 0.8).z),
            1e-10);
}

TEST(ZFromModeProduct, FactorizationProperty) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Index dim = 1 + static_cast<Index>(seed % 16);
    const double hbar = 0.5 + 0.01 * static_cast<double>(seed);
    const Hamiltonian h = random_hamiltonian(dim, seed, 2.0, hbar);
    const auto p = random_state(dim, seed + 1000), q = random_state(dim, seed + 2000);
    const double t = 0.03 * static_cast<double>(seed);
    ASSERT_LE(std::abs(z_from_mode_product(p, q, spectral_decompose(h), t).z -
                       z_closed_form(p, q, h, t).z),
              1e-10)
        << seed;
  }
}

TEST(BasisInvariance, Examples) {
  const Hamiltonian h = random_hamiltonian(4, 2);
  const auto p = random_state(4, 3), q = random_state(4, 4);
  EXPECT_LE(basis_invariance_check(p, q, h, 0.7, CMatrix::Identity(4, 4)), 1e-15);

  CMatrix diag = CMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) diag(k, k) = 0.5 * k - 0.3;
  CMatrix perm = CMatrix::Zero(4, 4);
  perm(0, 2) = perm(1, 0) = perm(2, 3) = perm(3, 1) = 1.0;
  EXPECT_LE(basis_invariance_check(p, q, Hamiltonian(diag), 0.7, perm), 1e-12);

  const Hamiltonian h8 = random_hamiltonian(8, 5);
  EXPECT_LE(basis_invariance_check(random_state(8, 6), random_state(8, 7), h8, 1.9,
                                   random_unitary(8, 8)),
            1e-10);
}

TEST(BasisInvariance, RejectsNonUnitary) {
  const Hamiltonian h = random_hamiltonian(2, 2);
  CMatrix u = CMatrix::Identity(2, 2);
  u(0, 1) = 1e-6;
  EXPECT_THROW(basis_invariance_check(random_state(2, 1), random_state(2, 2), h, 1.0, u),
               ValidationError);
}

TEST(MaximizerProperty, UnitModulusOnlyAtOverlapOne) {
  const Hamiltonian h = random_hamiltonian(3, 8);
  const auto psi = random_state(3, 9);
  const auto evolved = evolve(h, psi, 0.4);
  // A global phase changes Z.
  const auto phased = StateVector::normalized(std::polar(1.0, 0.3) * evolved.amplitudes());
  EXPECT_LT(std::abs(z_closed_form(psi, phased, h, 0.4).z), 1.0 - 1e-3);
  EXPECT_NEAR(std::abs(z_closed_form(psi, evolved, h, 0.4).z), 1.0, 1e-14);
}
