#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hpath/types.hpp"

namespace hpath {

/// Uniform grid on [t_start, t_end] with `steps` slices. The slice width is
/// derived, never stored.
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, int steps);

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  int steps() const { return steps_; }
  double duration() const { return t_end_ - t_start_; }
  double dt() const { return duration() / steps_; }
  double time(int k) const { return t_start_ + duration() * k / steps_; }
  TimeGrid with_steps(int steps) const { return {t_start_, t_end_, steps}; }

 private:
  double t_start_;
  double t_end_;
  int steps_;
};

/// Single-mode coefficient path z_0 ... z_N on a TimeGrid. Endpoints are the
/// prescribed boundary values; interior values are unconstrained.
class PathLattice {
 public:
  PathLattice(TimeGrid grid, Complex z_start, Complex z_end, std::vector<Complex> interior);

  /// Every point equal to `z`.
  static PathLattice constant(TimeGrid grid, Complex z);

  const TimeGrid& grid() const { return grid_; }
  std::span<const Complex> points() const { return points_; }
  Complex front() const { return points_.front(); }
  Complex back() const { return points_.back(); }

 private:
  TimeGrid grid_;
  std::vector<Complex> points_;
};

struct CoherentChainProblem {
  Complex z0;
  Complex zf;
  double energy = 0.0;
  TimeGrid grid{0.0, 1.0, 1};
  double hbar = 1.0;
};

struct ActionValue {
  Complex value;
};

/// Time-sliced coherent-state exponent for H(zbar, z) = E zbar z:
///   sum_j [ (zbar_{j+1} - zbar_j) z_j / 2 - zbar_{j+1} (z_{j+1} - z_j) / 2
///           - (i dt / hbar) E zbar_{j+1} z_j ].
ActionValue discrete_action(const PathLattice& path, double energy, double hbar);

/// Integrates out z_1 ... z_{N-1} one slice at a time with the complex
/// Gaussian identity  int d^2z/pi exp(-a|z|^2 + u zbar + v z) = exp(uv/a)/a.
Complex chain_reduce_exact(const CoherentChainProblem& prob);

/// <z_f| exp(-i E a^dagger a t / hbar) |z_0>
///   = exp(-(|z_f|^2 + |z_0|^2)/2) exp(exp(-i E t / hbar) conj(z_f) z_0).
Complex analytic_propagator(const CoherentChainProblem& prob);

struct ConvergenceRow {
  int steps;
  double abs_error;
};

/// |chain_reduce_exact - analytic_propagator| for each N in `steps_list`
/// (strictly ascending).
std::vector<ConvergenceRow> convergence_study(const CoherentChainProblem& prob,
                                              std::span<const int> steps_list);

/// Least-squares slope of log(abs_error) against log(N).
double loglog_slope(std::span<const ConvergenceRow> rows);

inline constexpr int kMonteCarloMaxSteps = 6;
inline constexpr std::int64_t kMonteCarloMinSamples = 1000;

struct MonteCarloEstimate {
  Complex estimate;
  double standard_error = 0.0;
  /// Inverse variance scale of the Gaussian proposal per interior point.
  double proposal_precision = 1.0;
};

/// Importance-sampled estimate of the time-sliced integral. Interior points
/// are drawn from the complex Gaussian density (beta/pi) exp(-beta|z|^2) with
/// beta = 1 - |c| cos(pi/N), c = 1 - i E dt / hbar the slice coupling. For
/// N = 2 there is no interior coupling and beta = 1, the standard weight of
/// the measure d^2z/pi. For N >= 3 the standard weight gives an estimator of
/// infinite variance (|c| >= 1), so the proposal is widened to the spectral
/// gap of the chain, which keeps the variance finite whenever the integral
/// converges absolutely (|c| cos(pi/N) < 1). The sample budget is split
/// over `substreams` independently seeded generators that run concurrently;
/// the result depends only on (prob, samples, seed, substreams).
///
/// Refuses (ValidationError) when N > kMonteCarloMaxSteps, samples <
/// kMonteCarloMinSamples, or the integral is not absolutely convergent.
MonteCarloEstimate monte_carlo_estimate(const CoherentChainProblem& prob, std::int64_t samples,
                                        std::uint64_t seed, int substreams = 1);

}  // namespace hpath
