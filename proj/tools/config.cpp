#include "config.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hpath::cli {

namespace {

std::string join(std::initializer_list<std::string_view> keys) {
  std::string out;
  for (auto k : keys) {
    if (!out.empty()) out += ", ";
    out += k;
  }
  return out;
}

}  // namespace

Section::Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) throw ValidationError(path_ + ": expected an object");
}

void Section::allow(std::initializer_list<std::string_view> keys) const {
  for (auto it = j_.begin(); it != j_.end(); ++it) {
    bool known = false;
    for (auto k : keys) known = known || it.key() == k;
    if (!known) {
      throw ValidationError(at(it.key()) + ": unknown field (allowed: " + join(keys) + ")");
    }
  }
}

bool Section::has(const std::string& key) const { return j_.contains(key); }

std::string Section::at(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

const Json& Section::raw(const std::string& key) const {
  if (!has(key)) throw ValidationError(at(key) + ": required field missing");
  return j_.at(key);
}

double Section::number(const std::string& key) const {
  const Json& v = raw(key);
  if (!v.is_number()) throw ValidationError(at(key) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(at(key) + ": must be finite");
  return x;
}

double Section::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::int64_t Section::integer(const std::string& key) const {
  const Json& v = raw(key);
  if (!v.is_number_integer()) throw ValidationError(at(key) + ": expected an integer");
  if (v.is_number_unsigned() &&
      v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw ValidationError(at(key) + ": integer out of range");
  }
  return v.get<std::int64_t>();
}

std::int64_t Section::integer(const std::string& key, std::int64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::uint64_t Section::seed(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const Json& v = raw(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ValidationError(at(key) + ": expected a nonnegative integer seed");
}

bool Section::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Json& v = raw(key);
  if (!v.is_boolean()) throw ValidationError(at(key) + ": expected true or false");
  return v.get<bool>();
}

std::string Section::string(const std::string& key) const {
  const Json& v = raw(key);
  if (!v.is_string()) throw ValidationError(at(key) + ": expected a string");
  return v.get<std::string>();
}

Complex Section::complex(const std::string& key) const {
  return io::complex_from_json(raw(key), at(key));
}

Complex Section::complex(const std::string& key, Complex fallback) const {
  return has(key) ? complex(key) : fallback;
}

std::vector<double> Section::numbers(const std::string& key) const {
  const Json& v = raw(key);
  if (!v.is_array() || v.empty()) throw ValidationError(at(key) + ": expected a non-empty array");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string where = at(key) + "[" + std::to_string(k) + "]";
    if (!v[k].is_number()) throw ValidationError(where + ": expected a number");
    const double x = v[k].get<double>();
    if (!std::isfinite(x)) throw ValidationError(where + ": must be finite");
    out.push_back(x);
  }
  return out;
}

std::vector<int> Section::integers(const std::string& key) const {
  const Json& v = raw(key);
  if (!v.is_array() || v.empty()) throw ValidationError(at(key) + ": expected a non-empty array");
  std::vector<int> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string where = at(key) + "[" + std::to_string(k) + "]";
    if (!v[k].is_number_integer()) throw ValidationError(where + ": expected an integer");
    const auto x = v[k].get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      throw ValidationError(where + ": integer out of range");
    }
    out.push_back(static_cast<int>(x));
  }
  return out;
}

Section Section::child(const std::string& key) const { return Section(raw(key), at(key)); }

Json parse_config_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(source + ": invalid JSON: " + e.what());
  }
}

Hamiltonian read_hamiltonian(const Section& s, double hbar, std::uint64_t base_seed) {
  const std::string source = s.string("source");
  if (source == "random") {
    s.allow({"source", "dim", "energy_scale", "seed"});
    const auto dim = s.integer("dim");
    if (dim < 1 || dim > 64) throw ValidationError(s.at("dim") + ": must be in [1, 64]");
    const double scale = s.number("energy_scale", 1.0);
    return random_hamiltonian(dim, s.seed("seed", base_seed + kHamiltonianSalt), scale, hbar);
  }
  if (source == "explicit") {
    s.allow({"source", "matrix"});
    const CMatrix m = io::matrix_from_json(s.raw("matrix"), s.at("matrix"));
    if (m.rows() != m.cols()) throw ValidationError(s.at("matrix") + ": matrix must be square");
    try {
      return Hamiltonian(m, hbar);
    } catch (const ValidationError& e) {
      throw ValidationError(s.at("matrix") + ": " + e.what());
    }
  }
  if (source == "diagonal") {
    s.allow({"source", "energies"});
    const auto e = s.numbers("energies");
    CMatrix m = CMatrix::Zero(static_cast<Index>(e.size()), static_cast<Index>(e.size()));
    for (std::size_t k = 0; k < e.size(); ++k) m(static_cast<Index>(k), static_cast<Index>(k)) = e[k];
    return Hamiltonian(m, hbar);
  }
  throw ValidationError(s.at("source") + ": expected \"random\", \"explicit\" or \"diagonal\"");
}

StateVector read_state(const Section& s, Index dim, std::uint64_t default_seed,
                       const std::optional<StateVector>& evolved) {
  const std::string source = s.string("source");
  if (source == "random") {
    s.allow({"source", "seed"});
    return random_state(dim, s.seed("seed", default_seed));
  }
  if (source == "explicit") {
    s.allow({"source", "amplitudes", "normalize"});
    const CVector v = io::vector_from_json(s.raw("amplitudes"), s.at("amplitudes"));
    if (v.size() != dim) {
      std::ostringstream msg;
      msg << s.at("amplitudes") << ": expected " << dim << " amplitudes, got " << v.size();
      throw ValidationError(msg.str());
    }
    try {
      return s.boolean("normalize", false) ? StateVector::normalized(v) : StateVector::validated(v);
    } catch (const ValidationError& e) {
      throw ValidationError(s.at("amplitudes") + ": " + e.what());
    }
  }
  if (source == "basis") {
    s.allow({"source", "index"});
    const auto k = s.integer("index");
    if (k < 0 || k >= dim) throw ValidationError(s.at("index") + ": out of range");
    return StateVector::basis(dim, k);
  }
  if (evolved && source == "evolved") {
    s.allow({"source", "phase"});
    const Complex phase = s.complex("phase", 1.0);
    if (std::abs(std::abs(phase) - 1.0) > kNormTolerance) {
      throw ValidationError(s.at("phase") + ": must have unit modulus");
    }
    return StateVector::normalized(phase * evolved->amplitudes());
  }
  if (evolved && source == "orthogonal_to_evolved") {
    s.allow({"source", "seed"});
    if (dim < 2) throw ValidationError(s.path() + ": no orthogonal state exists in dimension 1");
    const CVector u = evolved->amplitudes();
    CVector r = random_state(dim, s.seed("seed", default_seed)).amplitudes();
    r -= u.dot(r) * u;
    r -= u.dot(r) * u;
    return StateVector::normalized(r);
  }
  throw ValidationError(s.at("source") + ": expected \"random\", \"explicit\" or \"basis\"" +
                        (evolved ? std::string(", \"evolved\" or \"orthogonal_to_evolved\"") : ""));
}

OptimizerConfig read_optimizer(const Section& s, std::uint64_t seed) {
  s.allow({"step_size", "max_iters", "grad_tol"});
  OptimizerConfig cfg;
  cfg.step_size = s.number("step_size", cfg.step_size);
  const auto iters = s.integer("max_iters", cfg.max_iters);
  if (iters < 1 || iters > std::numeric_limits<int>::max()) {
    throw ValidationError(s.at("max_iters") + ": must be a positive int");
  }
  cfg.max_iters = static_cast<int>(iters);
  cfg.grad_tol = s.number("grad_tol", cfg.grad_tol);
  cfg.seed = seed;
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(s.path() + ": " + e.what());
  }
  return cfg;
}

}  // namespace hpath::cli
