#pragma once

#include <filesystem>
#include <ostream>

#include "dwym/cli/config.hpp"

namespace dwym::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  /// Refinement factor between the coarse and the fine run of a study.
  int refine = 2;
  bool algebraic_only = false;
  /// Negates the explicit correction in check-invariance so that the check
  /// must fail. Test hook.
  bool broken_sign = false;
};

/// Each command writes a report headed by the effective config to `report`
/// and returns its exit code. Config problems surface as ConfigError, blown
/// up runs as NumericalError; run_command maps both to exit codes.
int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& report);
int cmd_check_invariance(const RunConfig& cfg, const CommandOptions& opt, std::ostream& report);
int cmd_check_noether(const RunConfig& cfg, const CommandOptions& opt, std::ostream& report);
int cmd_reduce_u1(const RunConfig& cfg, const CommandOptions& opt, std::ostream& report);
int cmd_dispersion(const RunConfig& cfg, const CommandOptions& opt, std::ostream& report);

/// Dispatches by subcommand name, catching library exceptions. Error text
/// goes to `err`.
int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opt,
                std::ostream& report, std::ostream& err);

}  // namespace dwym::cli
