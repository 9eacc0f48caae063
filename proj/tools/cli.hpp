#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "config.hpp"

namespace hpath::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNotConverged = 3;

/// Result of one subcommand: the text for --out (or stdout) and an exit code.
struct CommandOutput {
  std::string text;
  int exit_code = kExitOk;
  /// Secondary table requested by the config (collapse "sweep_csv").
  std::optional<std::string> side_path;
  std::string side_text;
};

/// `seed_override` replaces the config's top-level "seed" when set.
CommandOutput cmd_zeval(const Json& config, std::optional<std::uint64_t> seed_override);
CommandOutput cmd_lattice(const Json& config, std::optional<std::uint64_t> seed_override);
CommandOutput cmd_optimize(const Json& config, std::optional<std::uint64_t> seed_override);
CommandOutput cmd_collapse(const Json& config, std::optional<std::uint64_t> seed_override);

/// Runs the module's closed-form examples, one "ok"/"FAIL" line each.
/// Returns kExitOk when all pass.
int selftest(const std::string& command, std::ostream& out);

/// Full command line, argv[0] included. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hpath::cli
