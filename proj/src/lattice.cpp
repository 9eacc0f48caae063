#include "hpath/lattice.hpp"

#include <array>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include "hpath/rng.hpp"

namespace hpath {

namespace {

// Coefficients of one slice's exponent in the variables (z_j, z_{j+1}):
//   cross * conj(z_{j+1}) z_j - left * |z_j|^2 - right * |z_{j+1}|^2.
struct SliceForm {
  Complex cross;
  double left;
  double right;
};

SliceForm slice_form(double energy, double dt, double hbar) {
  return {Complex(1.0, -energy * dt / hbar), 0.5, 0.5};
}

Complex slice_sum(std::span<const Complex> z, double energy, double dt, double hbar) {
  const Complex i_eps(0.0, dt / hbar);
  Complex total = 0.0;
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    const Complex zj = z[j];
    const Complex zn = z[j + 1];
    total += 0.5 * (std::conj(zn) - std::conj(zj)) * zj - 0.5 * std::conj(zn) * (zn - zj) -
             i_eps * energy * std::conj(zn) * zj;
  }
  return total;
}

// Streaming mean and sum of squared deviations for complex samples.
struct Moments {
  std::int64_t count = 0;
  Complex mean = 0.0;
  double m2 = 0.0;

  void add(Complex w) {
    ++count;
    const Complex delta = w - mean;
    mean += delta / static_cast<double>(count);
    m2 += std::real(std::conj(delta) * (w - mean));
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    const auto n = static_cast<double>(count + other.count);
    const Complex delta = other.mean - mean;
    m2 += other.m2 + std::norm(delta) * static_cast<double>(count) *
                         static_cast<double>(other.count) / n;
    mean += delta * static_cast<double>(other.count) / n;
    count += other.count;
  }
};

}  // namespace

TimeGrid::TimeGrid(double t_start, double t_end, int steps)
    : t_start_(t_start), t_end_(t_end), steps_(steps) {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
    throw ValidationError("time grid requires finite t_end > t_start");
  }
  if (steps < 1) throw ValidationError("time grid requires at least one step");
}

PathLattice::PathLattice(TimeGrid grid, Complex z_start, Complex z_end,
                         std::vector<Complex> interior)
    : grid_(grid) {
  if (static_cast<int>(interior.size()) != grid_.steps() - 1) {
    throw ValidationError("path lattice needs exactly N - 1 interior points");
  }
  points_.reserve(interior.size() + 2);
  points_.push_back(z_start);
  points_.insert(points_.end(), interior.begin(), interior.end());
  points_.push_back(z_end);
}

PathLattice PathLattice::constant(TimeGrid grid, Complex z) {
  return {grid, z, z, std::vector<Complex>(static_cast<std::size_t>(grid.steps() - 1), z)};
}

ActionValue discrete_action(const PathLattice& path, double energy, double hbar) {
  return {slice_sum(path.points(), energy, path.grid().dt(), hbar)};
}

Complex chain_reduce_exact(const CoherentChainProblem& prob) {
  const int n = prob.grid.steps();
  const SliceForm form = slice_form(prob.energy, prob.grid.dt(), prob.hbar);

  // Invariant: once z_1 ... z_{k-1} are integrated out, the remaining z_0
  // dependence is prefactor * exp(bilinear * conj(z_k) z_0). Integrating z_k
  // with u = bilinear z_0, v = cross conj(z_{k+1}) and a = right + left keeps
  // the form with prefactor / a and bilinear * cross / a.
  Complex prefactor = 1.0;
  Complex bilinear = form.cross;
  for (int k = 1; k < n; ++k) {
    const double a = form.right + form.left;
    prefactor /= a;
    bilinear = bilinear * form.cross / a;
  }
  const double boundary = form.left * std::norm(prob.z0) + form.right * std::norm(prob.zf);
  return prefactor * std::exp(-boundary + bilinear * std::conj(prob.zf) * prob.z0);
}

Complex analytic_propagator(const CoherentChainProblem& prob) {
  const double phase = -prob.energy * prob.grid.duration() / prob.hbar;
  return std::exp(-0.5 * (std::norm(prob.zf) + std::norm(prob.z0))) *
         std::exp(std::polar(1.0, phase) * std::conj(prob.zf) * prob.z0);
}

std::vector<ConvergenceRow> convergence_study(const CoherentChainProblem& prob,
                                              std::span<const int> steps_list) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(steps_list.size());
  const Complex exact = analytic_propagator(prob);
  for (std::size_t i = 0; i < steps_list.size(); ++i) {
    if (i > 0 && steps_list[i] <= steps_list[i - 1]) {
      throw ValidationError("convergence_study: N list must be strictly ascending");
    }
    CoherentChainProblem p = prob;
    p.grid = prob.grid.with_steps(steps_list[i]);
    rows.push_back({steps_list[i], std::abs(chain_reduce_exact(p) - exact)});
  }
  return rows;
}

double loglog_slope(std::span<const ConvergenceRow> rows) {
  if (rows.size() < 2) throw ValidationError("loglog_slope needs at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    if (!(r.abs_error > 0.0)) throw ValidationError("loglog_slope needs positive errors");
    const double x = std::log(static_cast<double>(r.steps));
    const double y = std::log(r.abs_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto m = static_cast<double>(rows.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

MonteCarloEstimate monte_carlo_estimate(const CoherentChainProblem& prob, std::int64_t samples,
                                        std::uint64_t seed, int substreams) {
  const int n = prob.grid.steps();
  if (n > kMonteCarloMaxSteps) {
    std::ostringstream msg;
    msg << "monte_carlo_estimate refused: N = " << n << " exceeds " << kMonteCarloMaxSteps
        << "; estimator variance grows too quickly with N, use chain_reduce_exact";
    throw ValidationError(msg.str());
  }
  if (samples < kMonteCarloMinSamples) {
    throw ValidationError("monte_carlo_estimate refused: need at least 1000 samples");
  }
  if (substreams < 1) throw ValidationError("monte_carlo_estimate: substreams must be >= 1");

  if (n == 1) return {chain_reduce_exact(prob), 0.0, 1.0};

  const double dt = prob.grid.dt();
  const double coupling = std::abs(slice_form(prob.energy, dt, prob.hbar).cross);
  const double gap_fraction = n == 2 ? 0.0 : coupling * std::cos(std::numbers::pi / n);
  if (gap_fraction >= 1.0) {
    throw ValidationError(
        "monte_carlo_estimate refused: time-sliced integral is not absolutely convergent");
  }
  const double beta = 1.0 - gap_fraction;
  const double scale = 1.0 / std::sqrt(beta);
  const int interior = n - 1;
  const double log_norm = -interior * std::log(beta);

  auto run_stream = [&](int stream, std::int64_t count) {
    ComplexGaussianRng rng(seed, static_cast<std::uint64_t>(stream) + 1);
    std::array<Complex, kMonteCarloMaxSteps + 1> z{};
    z[0] = prob.z0;
    z[static_cast<std::size_t>(n)] = prob.zf;
    const std::span<const Complex> path(z.data(), static_cast<std::size_t>(n) + 1);
    Moments m;
    for (std::int64_t s = 0; s < count; ++s) {
      double radial = 0.0;
      for (int k = 1; k < n; ++k) {
        z[static_cast<std::size_t>(k)] = scale * rng.next();
        radial += std::norm(z[static_cast<std::size_t>(k)]);
      }
      m.add(std::exp(slice_sum(path, prob.energy, dt, prob.hbar) + beta * radial + log_norm));
    }
    return m;
  };

  const std::int64_t base = samples / substreams;
  const std::int64_t extra = samples % substreams;
  std::vector<std::future<Moments>> jobs;
  jobs.reserve(static_cast<std::size_t>(substreams));
  for (int s = 0; s < substreams; ++s) {
    const std::int64_t count = base + (s < extra ? 1 : 0);
    jobs.push_back(std::async(substreams > 1 ? std::launch::async : std::launch::deferred,
                              run_stream, s, count));
  }
  Moments total;
  for (auto& job : jobs) total.merge(job.get());

  const auto count = static_cast<double>(total.count);
  const double variance = total.m2 / (count - 1.0);
  return {total.mean, std::sqrt(variance / count), beta};
}

}  // namespace hpath
