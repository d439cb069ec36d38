#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dwym/cli/commands.hpp"
#include "dwym/cli/config.hpp"

namespace {

struct Command {
  const char* name;
  const char* help;
};

constexpr Command kCommands[] = {
    {"simulate", "evolve the configured state and write the diagnostics CSV"},
    {"check-invariance", "form-invariance defect of random gauge transformations at two resolutions"},
    {"check-noether", "current divergence, Gauss, Maxwell and decomposition residuals at two resolutions"},
    {"reduce-u1", "compare the matrix integrator at N = 1 with the scalar one"},
    {"dispersion", "free-field frequency against the discrete and continuum dispersion relations"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covariant Hamiltonian gauge-field lattice simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  dwym::cli::CommandOptions opt;
  app.add_option("--config", config_path, "TOML run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out_dir, "directory for the CSV, snapshot and report");
  app.add_option("--refine", opt.refine, "refinement factor of convergence studies")->check(CLI::Range(2, 16));
  app.add_flag("--algebraic-only", opt.algebraic_only, "check-noether: only the off-shell identity");
  app.add_flag("--broken-sign", opt.broken_sign)->group("");

  for (const Command& c : kCommands) app.add_subcommand(c.name, c.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? dwym::cli::kExitPass : dwym::cli::kExitUsage;
  }

  dwym::cli::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = dwym::cli::load_config(config_path);
  } catch (const dwym::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dwym::cli::kExitUsage;
  }
  if (seed) cfg.seed = *seed;
  if (!out_dir.empty()) opt.out_dir = out_dir;

  const std::string name = app.get_subcommands().front()->get_name();
  std::ostringstream report;
  const int code = dwym::cli::run_command(name, cfg, opt, report, std::cerr);
  std::cout << report.str();
  if (!out_dir.empty() && !report.str().empty()) {
    std::ofstream(opt.out_dir / (name + ".txt")) << report.str();
  }
  return code;
}
