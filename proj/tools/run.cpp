#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace hpath::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
  if (!out.flush()) throw std::runtime_error("failed writing output file " + path);
}

using Command = CommandOutput (*)(const Json&, std::optional<std::uint64_t>);

struct Subcommand {
  const char* name;
  const char* help;
  Command fn;
};

constexpr Subcommand kSubcommands[] = {
    {"zeval", "Evaluate Z(psi_i -> psi_e) in closed form", cmd_zeval},
    {"lattice", "Convergence table of the time-sliced coherent-state propagator", cmd_lattice},
    {"optimize", "Maximize |Z| over normalized final states", cmd_optimize},
    {"collapse", "Quantumness-penalized path optimization over a lambda sweep", cmd_collapse},
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generating-functional experiments over Hilbert-space paths", "hpath"};
  app.require_subcommand(1);

  struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool selftest = false;
  };
  std::vector<Options> options(std::size(kSubcommands));
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < std::size(kSubcommands); ++k) {
    auto* sub = app.add_subcommand(kSubcommands[k].name, kSubcommands[k].help);
    sub->add_option("--config", options[k].config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", options[k].seed, "Base seed, overrides the config's \"seed\"");
    sub->add_option("--out", options[k].out, "Write the result here instead of stdout");
    sub->add_flag("--selftest", options[k].selftest, "Run closed-form checks and exit");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  std::size_t chosen = 0;
  while (!subs[chosen]->parsed()) ++chosen;
  const Options& opt = options[chosen];
  const std::string name = kSubcommands[chosen].name;

  try {
    if (opt.selftest) return selftest(name, out);
    if (opt.config.empty()) throw ValidationError("--config is required unless --selftest is given");
    const Json config = parse_config_text(read_file(opt.config), opt.config);
    const CommandOutput result = kSubcommands[chosen].fn(config, opt.seed);
    if (opt.out.empty()) {
      out << result.text;
    } else {
      write_file(opt.out, result.text);
    }
    if (result.side_path) write_file(*result.side_path, result.side_text);
    if (result.exit_code == kExitNotConverged) err << name << ": optimizer did not converge\n";
    return result.exit_code;
  } catch (const ValidationError& e) {
    err << name << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << name << ": " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace hpath::cli
