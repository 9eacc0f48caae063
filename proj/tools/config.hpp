#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hpath/hilbert.hpp"
#include "hpath/json_io.hpp"
#include "hpath/optimizer.hpp"
#include "hpath/quantumness.hpp"

namespace hpath::cli {

using io::Json;

/// Read-only view of one JSON object in a config, carrying its dotted path
/// for diagnostics. Every accessor throws ValidationError naming the path.
class Section {
 public:
  Section(const Json& j, std::string path);

  /// Rejects any key not listed.
  void allow(std::initializer_list<std::string_view> keys) const;

  bool has(const std::string& key) const;
  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::int64_t integer(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  std::uint64_t seed(const std::string& key, std::uint64_t fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key) const;
  Complex complex(const std::string& key) const;
  Complex complex(const std::string& key, Complex fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;
  const Json& raw(const std::string& key) const;
  Section child(const std::string& key) const;

 private:
  const Json& j_;
  std::string path_;
};

Json parse_config_text(const std::string& text, const std::string& source);

/// Seeds for config components that do not set their own: base + salt.
inline constexpr std::uint64_t kHamiltonianSalt = 1;
inline constexpr std::uint64_t kInitialStateSalt = 2;
inline constexpr std::uint64_t kFinalStateSalt = 3;

/// {"source": "random", "dim", "energy_scale"?, "seed"?}
/// {"source": "explicit", "matrix"}
/// {"source": "diagonal", "energies"}
Hamiltonian read_hamiltonian(const Section& s, double hbar, std::uint64_t base_seed);

/// {"source": "random", "seed"?}
/// {"source": "explicit", "amplitudes", "normalize"?}
/// {"source": "basis", "index"}
/// Final states additionally accept {"source": "evolved", "phase"?} and
/// {"source": "orthogonal_to_evolved", "seed"?}, both relative to `evolved`.
StateVector read_state(const Section& s, Index dim, std::uint64_t default_seed,
                       const std::optional<StateVector>& evolved = std::nullopt);

/// {"step_size"?, "max_iters"?, "grad_tol"?}; the seed comes from the caller.
OptimizerConfig read_optimizer(const Section& s, std::uint64_t seed);

}  // namespace hpath::cli
