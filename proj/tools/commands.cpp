#include <algorithm>
#include <future>
#include <sstream>

#include "cli.hpp"
#include "hpath/functional.hpp"
#include "hpath/lattice.hpp"
#include "hpath/models.hpp"

namespace hpath::cli {

namespace {

std::uint64_t base_seed(const Section& root, std::optional<std::uint64_t> seed_override) {
  return seed_override ? *seed_override : root.seed("seed", 0);
}

struct TimeSpan {
  double t_i;
  double t_e;
};

TimeSpan read_span(const Section& root) {
  const double t_i = root.number("t_i", 0.0);
  const double t_e = root.number("t_e");
  return {t_i, t_e};
}

std::string finish_json(const Json& j) { return io::dump(j) + "\n"; }

// Everything the zeval and optimize commands share.
struct EndpointSetup {
  Hamiltonian h;
  StateVector psi_i;
  double t;
  std::uint64_t seed;
};

EndpointSetup read_endpoints(const Section& root, std::optional<std::uint64_t> seed_override) {
  const double hbar = root.number("hbar", 1.0);
  if (!(hbar > 0.0)) throw ValidationError(root.at("hbar") + ": must be positive");
  const std::uint64_t seed = base_seed(root, seed_override);
  Hamiltonian h = read_hamiltonian(root.child("hamiltonian"), hbar, seed);
  StateVector psi_i = read_state(root.child("psi_i"), h.dim(), seed + kInitialStateSalt);
  const TimeSpan span = read_span(root);
  return {std::move(h), std::move(psi_i), span.t_e - span.t_i, seed};
}

}  // namespace

CommandOutput cmd_zeval(const Json& config, std::optional<std::uint64_t> seed_override) {
  const Section root(config, "config");
  root.allow({"seed", "hbar", "t_i", "t_e", "hamiltonian", "psi_i", "psi_e"});
  const EndpointSetup setup = read_endpoints(root, seed_override);
  const StateVector evolved = evolve(setup.h, setup.psi_i, setup.t);
  const StateVector psi_e = read_state(root.child("psi_e"), setup.h.dim(),
                                       setup.seed + kFinalStateSalt, evolved);

  const FunctionalValue z = z_closed_form(setup.psi_i, psi_e, setup.h, setup.t);
  Json out = {{"z_re", z.z.real()},
              {"z_im", z.z.imag()},
              {"abs_z", std::abs(z.z)},
              {"overlap_re", z.overlap->real()},
              {"overlap_im", z.overlap->imag()}};
  return {finish_json(out), kExitOk, {}, {}};
}

CommandOutput cmd_lattice(const Json& config, std::optional<std::uint64_t> seed_override) {
  const Section root(config, "config");
  root.allow({"seed", "z0", "zf", "energy", "hbar", "t_start", "t_end", "n_list"});
  (void)base_seed(root, seed_override);  // accepted for uniformity; the table is deterministic

  CoherentChainProblem prob;
  prob.z0 = root.complex("z0");
  prob.zf = root.complex("zf");
  prob.energy = root.number("energy");
  prob.hbar = root.number("hbar", 1.0);
  if (!(prob.hbar > 0.0)) throw ValidationError(root.at("hbar") + ": must be positive");
  const double t_start = root.number("t_start", 0.0);
  const double t_end = root.number("t_end");
  if (!(t_end > t_start)) throw ValidationError(root.at("t_end") + ": must exceed t_start");
  prob.grid = TimeGrid(t_start, t_end, 1);

  const std::vector<int> steps = root.integers("n_list");
  std::vector<ConvergenceRow> rows;
  try {
    rows = convergence_study(prob, steps);
  } catch (const ValidationError& e) {
    throw ValidationError(root.at("n_list") + ": " + e.what());
  }

  std::ostringstream csv;
  csv << "N,abs_error\n";
  for (const auto& row : rows) csv << row.steps << "," << io::format_double(row.abs_error) << "\n";
  return {csv.str(), kExitOk, {}, {}};
}

CommandOutput cmd_optimize(const Json& config, std::optional<std::uint64_t> seed_override) {
  const Section root(config, "config");
  root.allow({"seed", "hbar", "t_i", "t_e", "hamiltonian", "psi_i", "optimizer"});
  const EndpointSetup setup = read_endpoints(root, seed_override);
  const OptimizerConfig cfg = root.has("optimizer")
                                  ? read_optimizer(root.child("optimizer"), setup.seed)
                                  : read_optimizer(Section(Json::object(), root.at("optimizer")),
                                                   setup.seed);

  const OptimizationResult r = maximize_final_state(setup.h, setup.psi_i, setup.t, cfg);
  Json out = {{"argmax_state", io::to_json(r.argmax_state.amplitudes())},
              {"objective", r.objective},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"fidelity_vs_schrodinger", r.fidelity_vs_schrodinger}};
  return {finish_json(out), r.converged ? kExitOk : kExitNotConverged, {}, {}};
}

namespace {

struct CollapseSetup {
  Hamiltonian h;
  StateVector psi_i;
  std::optional<CMatrix> default_pointers;
  std::optional<double> default_duration;
};

CollapseSetup read_model(const Section& s, double hbar, std::uint64_t seed) {
  const std::string kind = s.string("kind");
  if (kind == "qubit_detector") {
    s.allow({"kind", "a0", "a1", "coupling"});
    const double g = s.number("coupling", 1.0);
    if (!(g > 0.0)) throw ValidationError(s.at("coupling") + ": must be positive");
    QubitDetectorModel m = qubit_detector_model(s.complex("a0"), s.complex("a1"), g, hbar);
    return {std::move(m.h), std::move(m.psi_i), std::move(m.pointer_basis), m.measurement_time};
  }
  if (kind == "custom") {
    s.allow({"kind", "hamiltonian", "psi_i"});
    Hamiltonian h = read_hamiltonian(s.child("hamiltonian"), hbar, seed);
    StateVector psi = read_state(s.child("psi_i"), h.dim(), seed + kInitialStateSalt);
    return {std::move(h), std::move(psi), std::nullopt, std::nullopt};
  }
  throw ValidationError(s.at("kind") + ": expected \"qubit_detector\" or \"custom\"");
}

QuantumnessMeasure read_measure(const Section& s, Index dim,
                                const std::optional<CMatrix>& default_pointers) {
  const std::string kind = s.string("kind");
  if (kind == "pointer_deviation") {
    s.allow({"kind", "pointer_states"});
    CMatrix basis;
    if (s.has("pointer_states")) {
      const Json& states = s.raw("pointer_states");
      if (!states.is_array() || states.empty()) {
        throw ValidationError(s.at("pointer_states") + ": expected a non-empty array of states");
      }
      basis.resize(dim, static_cast<Index>(states.size()));
      for (std::size_t k = 0; k < states.size(); ++k) {
        const std::string where = s.at("pointer_states") + "[" + std::to_string(k) + "]";
        const CVector v = io::vector_from_json(states[k], where);
        if (v.size() != dim) throw ValidationError(where + ": dimension mismatch");
        basis.col(static_cast<Index>(k)) = v;
      }
    } else {
      basis = default_pointers ? *default_pointers : CMatrix(CMatrix::Identity(dim, dim));
    }
    try {
      return QuantumnessMeasure::pointer_deviation(basis);
    } catch (const ValidationError& e) {
      throw ValidationError(s.at("pointer_states") + ": " + e.what());
    }
  }
  if (kind == "linear_entropy") {
    s.allow({"kind", "d_a", "d_b"});
    const auto d_a = s.integer("d_a");
    const auto d_b = s.integer("d_b");
    if (d_a < 1 || d_b < 1 || d_a * d_b != dim) {
      std::ostringstream msg;
      msg << s.path() << ": dimension " << dim << " does not factor as " << d_a << " x " << d_b;
      throw ValidationError(msg.str());
    }
    return QuantumnessMeasure::linear_entropy(d_a, d_b);
  }
  throw ValidationError(s.at("kind") + ": expected \"pointer_deviation\" or \"linear_entropy\"");
}

Json report_json(double lambda, const PenalizedResult& r) {
  Json ties = Json::array();
  for (Index k : r.report.pointer_ties) ties.push_back(k);
  return {{"lambda", lambda},
          {"final_state", io::to_json(r.final_state.amplitudes())},
          {"nearest_pointer_index", r.report.nearest_pointer_index},
          {"fidelity_to_pointer", r.report.fidelity_to_pointer},
          {"pointer_ties", std::move(ties)},
          {"q_trajectory", r.report.q_trajectory},
          {"log_magnitude", r.log_magnitude},
          {"iterations", r.report.iterations},
          {"converged", r.report.converged}};
}

}  // namespace

CommandOutput cmd_collapse(const Json& config, std::optional<std::uint64_t> seed_override) {
  const Section root(config, "config");
  root.allow({"seed", "hbar", "model", "measure", "lambdas", "t_start", "t_end", "steps",
              "interior_normalization", "optimizer", "sweep_csv"});
  const std::uint64_t seed = base_seed(root, seed_override);
  const double hbar = root.number("hbar", 1.0);
  if (!(hbar > 0.0)) throw ValidationError(root.at("hbar") + ": must be positive");

  const CollapseSetup model = read_model(root.child("model"), hbar, seed);
  const QuantumnessMeasure measure =
      read_measure(root.child("measure"), model.h.dim(), model.default_pointers);

  const double t_start = root.number("t_start", 0.0);
  double t_end = 0.0;
  if (root.has("t_end")) {
    t_end = root.number("t_end");
  } else if (model.default_duration) {
    t_end = t_start + *model.default_duration;
  } else {
    throw ValidationError(root.at("t_end") + ": required for custom models");
  }
  if (!(t_end > t_start)) throw ValidationError(root.at("t_end") + ": must exceed t_start");
  const auto steps = root.integer("steps", 200);
  if (steps < 1 || steps > 100000) throw ValidationError(root.at("steps") + ": must be in [1, 100000]");
  const TimeGrid grid(t_start, t_end, static_cast<int>(steps));

  std::vector<double> lambdas = root.numbers("lambdas");
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (lambdas[k] < 0.0) {
      throw ValidationError(root.at("lambdas") + "[" + std::to_string(k) + "]: must be >= 0");
    }
  }
  std::sort(lambdas.begin(), lambdas.end());

  const OptimizerConfig cfg =
      read_optimizer(root.has("optimizer") ? root.child("optimizer")
                                           : Section(Json::object(), root.at("optimizer")),
                     seed);
  const bool interior_normalization = root.boolean("interior_normalization", true);

  std::vector<PenalizedPathProblem> problems;
  for (double lambda : lambdas) {
    PenalizedPathProblem p{model.psi_i, grid, model.h, {lambda, measure}, interior_normalization};
    try {
      p.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(root.path() + ": " + e.what());
    }
    problems.push_back(std::move(p));
  }

  // Runs are independent; results are gathered in ascending lambda order.
  std::vector<std::future<PenalizedResult>> runs;
  runs.reserve(problems.size());
  for (const auto& p : problems) {
    runs.push_back(std::async(std::launch::async, [&p, &cfg] { return optimize_penalized(p, cfg); }));
  }

  Json reports = Json::array();
  std::ostringstream sweep;
  sweep << "lambda,nearest_pointer_index,fidelity_to_pointer,final_q,log_magnitude,converged\n";
  bool all_converged = true;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const PenalizedResult r = runs[k].get();
    all_converged = all_converged && r.report.converged;
    reports.push_back(report_json(lambdas[k], r));
    sweep << io::format_double(lambdas[k]) << "," << r.report.nearest_pointer_index << ","
          << io::format_double(r.report.fidelity_to_pointer) << ","
          << io::format_double(r.report.q_trajectory.back()) << ","
          << io::format_double(r.log_magnitude) << "," << (r.report.converged ? 1 : 0) << "\n";
  }

  Json out = {{"approximation", "stationary_path"},
              {"t_start", t_start},
              {"t_end", t_end},
              {"steps", steps},
              {"reports", std::move(reports)}};
  CommandOutput result{finish_json(out), all_converged ? kExitOk : kExitNotConverged, {}, {}};
  if (root.has("sweep_csv")) {
    result.side_path = root.string("sweep_csv");
    result.side_text = sweep.str();
  }
  return result;
}

}  // namespace hpath::cli
