#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "dwym/dynamics.hpp"
#include "dwym/lattice.hpp"
#include "dwym/state.hpp"

namespace dwym::cli {

/// Bad config file, bad key or value, or a violated precondition. Maps to
/// exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModelKind { u1, sun };
enum class InitialKind { zero, coupled, plane_wave, snapshot };
enum class GaugeKind { smooth, constant };

struct RunConfig {
  std::uint64_t seed = 1;

  ModelKind model = ModelKind::u1;
  int n = 1;
  double q = 0.5;
  double m = 1.0;

  int dim = 2;
  int sites = 64;  ///< per spatial axis
  double length = 6.283185307179586;

  InitialKind initial = InitialKind::coupled;
  double amplitude = 0.1;
  int mode = 1;
  bool random_potential = true;
  std::string snapshot_in;

  std::optional<double> dt;  ///< overrides courant * dx when set
  double courant = 0.25;
  int steps = 256;
  int cadence = 16;
  bool form_check = false;

  std::string csv = "diagnostics.csv";
  std::string snapshot_out;  ///< empty: no final snapshot

  int draws = 20;
  GaugeKind gauge = GaugeKind::smooth;
  double gauge_amplitude = 1.0;
  /// Fine-grid defect relative to max |dH_explicit|, smooth gauge draws only.
  double defect_budget = 5e-2;

  int dispersion_steps = 400;

  double spacing() const noexcept { return length / sites; }
  double time_step() const noexcept { return dt.value_or(courant * spacing()); }
  ModelParams params() const { return {n, q, m}; }
  LatticeSpec slice() const;
  LatticeSpec spacetime() const;
  EvolutionConfig evolution() const;

  /// Range and consistency checks, including the CFL bound. Throws ConfigError.
  void validate() const;
  /// Effective configuration in the file syntax.
  std::string to_toml() const;
};

/// Parses TOML text; any key not listed in the schema is an error.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace dwym::cli
