#include <gtest/gtest.h>

#include <numbers>

#include "hpath/functional.hpp"
#include "hpath/lattice.hpp"
#include "hpath/rng.hpp"

using namespace hpath;

namespace {

constexpr Complex kI(0.0, 1.0);

CoherentChainProblem problem(Complex z0, Complex zf, double energy, double t, int n,
                             double hbar = 1.0) {
  return {z0, zf, energy, TimeGrid(0.0, t, n), hbar};
}

// Summand-by-summand evaluation of the sliced exponent, written out long-hand.
Complex hand_action(const std::vector<Complex>& z, double energy, double dt, double hbar) {
  Complex total = 0.0;
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    const Complex a = z[j], b = z[j + 1];
    total += 0.5 * (std::conj(b) - std::conj(a)) * a;
    total -= 0.5 * std::conj(b) * (b - a);
    total -= kI * dt / hbar * energy * std::conj(b) * a;
  }
  return total;
}

}  // namespace

TEST(TimeGrid, Invariants) {
  const TimeGrid g(0.5, 2.0, 3);
  EXPECT_DOUBLE_EQ(g.dt() * g.steps(), g.duration());
  EXPECT_DOUBLE_EQ(g.time(0), 0.5);
  EXPECT_DOUBLE_EQ(g.time(3), 2.0);
  EXPECT_THROW(TimeGrid(1.0, 1.0, 3), ValidationError);
  EXPECT_THROW(TimeGrid(0.0, 1.0, 0), ValidationError);
  EXPECT_THROW(TimeGrid(0.0, std::nan(""), 2), ValidationError);
}

TEST(PathLattice, EndpointsPinned) {
  const TimeGrid g(0.0, 1.0, 3);
  const PathLattice p(g, 1.0, kI, {Complex(5.0, 5.0), Complex(-7.0, 0.0)});
  EXPECT_EQ(p.front(), Complex(1.0));
  EXPECT_EQ(p.back(), kI);
  EXPECT_EQ(p.points().size(), 4u);
  EXPECT_THROW(PathLattice(g, 1.0, 1.0, {0.0}), ValidationError);
}

TEST(DiscreteAction, Examples) {
  const TimeGrid g(0.0, 2.0, 5);
  const Complex z(0.3, -1.1);
  EXPECT_EQ(discrete_action(PathLattice::constant(g, z), 0.0, 1.0).value, Complex(0.0));
  const double e = 1.7, hbar = 0.6;
  const Complex want = -kI * 5.0 * g.dt() * e / hbar * std::norm(z);
  EXPECT_LE(std::abs(discrete_action(PathLattice::constant(g, z), e, hbar).value - want), 1e-14);

  ComplexGaussianRng rng(3);
  const TimeGrid g2(0.0, 0.8, 2);
  const std::vector<Complex> pts = {rng.next(), rng.next(), rng.next()};
  const PathLattice path(g2, pts[0], pts[2], {pts[1]});
  EXPECT_LE(std::abs(discrete_action(path, e, hbar).value - hand_action(pts, e, g2.dt(), hbar)),
            1e-15);
}

TEST(ChainReduce, Examples) {
  const Complex z0(0.4, 0.1), zf(-0.2, 0.6);
  const double boundary = -0.5 * (std::norm(z0) + std::norm(zf));

  const auto p1 = problem(z0, zf, 0.9, 1.3, 1);
  const Complex c1 = 1.0 - kI * 0.9 * 1.3;
  EXPECT_LE(std::abs(chain_reduce_exact(p1) - std::exp(boundary + c1 * std::conj(zf) * z0)), 1e-15);

  for (int n : {1, 2, 7, 50}) {
    EXPECT_LE(std::abs(chain_reduce_exact(problem(z0, zf, 0.0, 3.0, n)) -
                       std::exp(boundary + std::conj(zf) * z0)),
              1e-15);
  }

  // Et/hbar = 1, N = 10, z0 = zf = 1: exp(-1) exp((1 - 0.1 i)^10).
  const Complex got = chain_reduce_exact(problem(1.0, 1.0, 1.0, 1.0, 10));
  EXPECT_LE(std::abs(got - std::exp(-1.0) * std::exp(std::pow(Complex(1.0, -0.1), 10))), 1e-14);
  EXPECT_NEAR(got.real(), 0.41354061815449111714, 1e-14);
  EXPECT_NEAR(got.imag(), -0.50280786129187094108, 1e-14);
}

TEST(ChainReduce, HbarScalesTheStep) {
  const auto a = chain_reduce_exact(problem(0.5, kI, 2.0, 1.0, 6, 2.0));
  const auto b = chain_reduce_exact(problem(0.5, kI, 1.0, 1.0, 6, 1.0));
  EXPECT_LE(std::abs(a - b), 1e-15);
}

TEST(ChainReduce, MatchesDirectQuadratureForTwoSlices) {
  // N = 2: one interior point, integrated on a Cartesian grid against d^2z/pi.
  const Complex z0(0.7, -0.2), zf(0.1, 0.5);
  const double e = 1.3, t = 0.9;
  const auto p = problem(z0, zf, e, t, 2);
  const int m = 400;
  const double half = 8.0, h = 2 * half / m;
  Complex sum = 0.0;
  for (int a = 0; a <= m; ++a) {
    for (int b = 0; b <= m; ++b) {
      const Complex z1(-half + a * h, -half + b * h);
      sum += std::exp(hand_action({z0, z1, zf}, e, t / 2, 1.0));
    }
  }
  const Complex quad = sum * h * h / std::numbers::pi;
  EXPECT_LE(std::abs(quad - chain_reduce_exact(p)), 1e-12);
}

TEST(AnalyticPropagator, Examples) {
  const Complex z0(0.3, 0.3), zf(-0.5, 0.2);
  const Complex overlap = std::exp(-0.5 * (std::norm(z0) + std::norm(zf)) + std::conj(zf) * z0);
  EXPECT_LE(std::abs(analytic_propagator(problem(z0, zf, 0.0, 2.0, 1)) - overlap), 1e-15);
  EXPECT_LE(std::abs(analytic_propagator(problem(0.0, zf, 1.1, 2.0, 1)) -
                     std::exp(-0.5 * std::norm(zf))),
            1e-15);
  EXPECT_LE(std::abs(analytic_propagator(problem(1.0, 1.0, 1.0, std::numbers::pi, 1)) -
                     std::exp(-2.0)),
            1e-15);
  const Complex k = analytic_propagator(problem(1.0, 1.0, 1.0, 1.0, 1));
  EXPECT_NEAR(k.real(), 0.42079361743004560186, 1e-15);
  EXPECT_NEAR(k.imag(), -0.47084264330993586067, 1e-15);
}

TEST(AnalyticPropagator, EqualsModeFactor) {
  ComplexGaussianRng rng(17);
  for (int k = 0; k < 100; ++k) {
    const Complex a_i = rng.next(), a_e = rng.next();
    const double e = 2.0 * rng.uniform() - 1.0, t = 3.0 * rng.uniform() + 0.01, hbar = 0.5 + rng.uniform();
    const auto p = problem(a_i, a_e, e, t, 1, hbar);
    EXPECT_LE(std::abs(analytic_propagator(p) - z_mode_factor(a_i, a_e, e, t, hbar)), 1e-15);
  }
}

TEST(ConvergenceStudy, Examples) {
  const int steps[] = {1, 10, 100, 1000};
  for (const auto& row : convergence_study(problem(0.5, kI, 0.0, 1.0, 1), steps)) {
    EXPECT_LE(row.abs_error, 1e-14);
  }

  const int decades[] = {10, 100, 1000};
  const auto rows = convergence_study(problem(1.0, 1.0, 1.0, 1.0, 1), decades);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_GT(rows[0].abs_error, rows[1].abs_error);
  EXPECT_GT(rows[1].abs_error, rows[2].abs_error);
  EXPECT_EQ(rows[2].steps, 1000);

  const int fit[] = {10, 100, 1000, 10000};
  const auto table = convergence_study(problem(1.0, 1.0, 1.0, 1.0, 1), fit);
  EXPECT_NEAR(loglog_slope(table), -1.0, 0.15);

  const int unsorted[] = {10, 5};
  EXPECT_THROW(convergence_study(problem(1.0, 1.0, 1.0, 1.0, 1), unsorted), ValidationError);
}

TEST(ConvergenceStudy, ErrorBoundAtTenThousandSlices) {
  const int n[] = {10000};
  for (double et : {-1.0, -0.5, 0.3, 1.0}) {
    for (Complex z : {Complex(1.0, 0.0), Complex(0.0, -1.0), Complex(0.6, 0.8), Complex(-0.3, 0.2)}) {
      const auto rows = convergence_study(problem(z, std::conj(z) * kI, et, 1.0, 1), n);
      EXPECT_LE(rows[0].abs_error, 1e-3);
    }
  }
}

TEST(MonteCarlo, Examples) {
  const auto p1 = problem(0.4, kI, 0.8, 1.0, 1);
  const auto one = monte_carlo_estimate(p1, 1000, 5);
  EXPECT_LE(std::abs(one.estimate - chain_reduce_exact(p1)), 1e-15);
  EXPECT_EQ(one.standard_error, 0.0);

  const auto p2 = problem(0.7, Complex(0.2, -0.5), 0.0, 1.0, 2);
  const auto mc2 = monte_carlo_estimate(p2, 100000, 1);
  const Complex exact2 = std::exp(-0.5 * (std::norm(p2.z0) + std::norm(p2.zf)) + std::conj(p2.zf) * p2.z0);
  EXPECT_LE(std::abs(mc2.estimate - exact2), 3 * mc2.standard_error);
  EXPECT_DOUBLE_EQ(mc2.proposal_precision, 1.0);

  const auto p3 = problem(1.0, 1.0, 1.0, 1.0, 3);
  const auto mc3 = monte_carlo_estimate(p3, 100000, 11);
  EXPECT_LE(std::abs(mc3.estimate - chain_reduce_exact(p3)), 3 * mc3.standard_error);
  EXPECT_GT(mc3.standard_error, 0.0);
}

TEST(MonteCarlo, Refusals) {
  EXPECT_THROW(monte_carlo_estimate(problem(1.0, 1.0, 1.0, 1.0, 7), 100000, 1), ValidationError);
  EXPECT_THROW(monte_carlo_estimate(problem(1.0, 1.0, 1.0, 1.0, 3), 999, 1), ValidationError);
  EXPECT_THROW(monte_carlo_estimate(problem(1.0, 1.0, 1.0, 1.0, 3), 1000, 1, 0), ValidationError);
  // |c| cos(pi/N) >= 1: the sliced integral is not absolutely convergent.
  EXPECT_THROW(monte_carlo_estimate(problem(1.0, 1.0, 40.0, 1.0, 6), 100000, 1), ValidationError);
}

TEST(MonteCarlo, DeterministicPerSeedAndSubstreamCount) {
  const auto p = problem(0.5, Complex(0.3, 0.4), 0.7, 1.0, 4);
  const auto a = monte_carlo_estimate(p, 20000, 9, 4);
  const auto b = monte_carlo_estimate(p, 20000, 9, 4);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.standard_error, b.standard_error);
  const auto c = monte_carlo_estimate(p, 20000, 10, 4);
  EXPECT_NE(a.estimate, c.estimate);
  const auto serial = monte_carlo_estimate(p, 20000, 9, 1);
  EXPECT_LE(std::abs(serial.estimate - a.estimate), 5 * (serial.standard_error + a.standard_error));
}

TEST(MonteCarlo, UnbiasedAcrossSeeds) {
  for (int n : {2, 3, 5}) {
    const auto p = problem(0.8, Complex(0.6, 0.1), 1.0, 1.0, n);
    const Complex exact = chain_reduce_exact(p);
    Complex mean = 0.0;
    double se = 0.0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto mc = monte_carlo_estimate(p, 20000, 1000 + seed);
      mean += mc.estimate / 30.0;
      se += mc.standard_error / 30.0;
    }
    EXPECT_LE(std::abs(mean - exact), 3 * se / std::sqrt(30.0)) << "N = " << n;
  }
}
