#include "dwym/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dwym/diagnostics.hpp"
#include "dwym/dynamics.hpp"
#include "dwym/gauge.hpp"
#include "dwym/noether.hpp"
#include "dwym/snapshot.hpp"

namespace dwym::cli {

namespace {

constexpr double kMinOrder = 1.8;
/// Residuals below this on both grids count as exact; their ratio is noise.
constexpr double kRoundingFloor = 1e-11;
constexpr double kExactDefect = 1e-10;
constexpr double kReductionTolerance = 1e-10;
constexpr double kDispersionTolerance = 1e-6;

std::string fmt(double v, const char* f = "%.6e") {
  char buf[48];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void header(std::ostream& os, const std::string& command, const RunConfig& cfg) {
  os << "# dwym " << command << "\n# effective config:\n";
  std::istringstream in(cfg.to_toml());
  for (std::string line; std::getline(in, line);) os << (line.empty() ? "#" : "#   " + line) << "\n";
}

/// Convergence verdict for one residual measured on a coarse and a refined grid.
struct Study {
  std::string name;
  double coarse = 0.0;
  double fine = 0.0;
  int refine = 2;

  bool exact() const { return coarse < kRoundingFloor && fine < kRoundingFloor; }
  double order() const { return std::log(coarse / fine) / std::log(static_cast<double>(refine)); }
  bool pass() const { return exact() || order() >= kMinOrder; }

  void print(std::ostream& os) const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-22s %14.6e %14.6e %8s  %s\n", name.c_str(), coarse, fine,
                  exact() ? "exact" : fmt(order(), "%.3f").c_str(), pass() ? "ok" : "FAIL");
    os << buf;
  }
};

void print_study_header(std::ostream& os, int refine) {
  const std::string fine = "fine/" + std::to_string(refine);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %14s %14s %8s\n", "quantity", "coarse", fine.c_str(), "order");
  os << buf;
}

LatticeSpec refined_slice(const RunConfig& cfg, int k) {
  const double dx = cfg.length / (cfg.sites * k);
  return LatticeSpec::slice(cfg.dim, cfg.sites * k, dx, cfg.time_step() / k);
}

LatticeSpec refined_spacetime(const RunConfig& cfg, int k) {
  return LatticeSpec::spacetime(cfg.dim, cfg.sites * k, cfg.length / (cfg.sites * k));
}

void require_dynamics(const RunConfig& cfg, const char* who) {
  if (cfg.dim != 2)
    throw ConfigError(std::string(who) + " evolves 1+1 dimensional slices; set lattice.dim = 2");
}

GaugeFieldState initial_state(const RunConfig& cfg, const LatticeSpec& slice) {
  const ModelParams params = cfg.params();
  std::mt19937_64 rng(cfg.seed);
  switch (cfg.initial) {
    case InitialKind::zero:
      return new_state(slice, params);
    case InitialKind::coupled:
      return coupled_initial_state(slice, params, rng, {cfg.amplitude, cfg.random_potential});
    case InitialKind::plane_wave: {
      GaugeFieldState st = discrete_plane_wave(slice, params, cfg.mode, cfg.amplitude, slice.spacing[0]);
      if (params.q != 0.0) {
        try {
          neutralize_charge(st, params);
        } catch (const std::domain_error&) {
          throw ConfigError("a single-component plane wave with q != 0 cannot be neutralized for N > 1");
        }
        solve_gauss(st, params);
      }
      return st;
    }
    case InitialKind::snapshot: {
      GaugeFieldState st;
      try {
        st = snapshot_read(cfg.snapshot_in, cfg.n);
      } catch (const SnapshotError& e) {
        throw ConfigError(cfg.snapshot_in + ": " + e.what());
      }
      if (!st.spec().is_slice()) throw ConfigError(cfg.snapshot_in + ": snapshot is not a time slice");
      if (st.params().q != params.q || st.params().m != params.m)
        throw ConfigError(cfg.snapshot_in + ": param mismatch (q, m differ from the config)");
      return st;
    }
  }
  return new_state(slice, params);
}

/// Gauge function for the configured model. Draws depend only on the rng
/// state and the box, so the same seed gives the same function on a refined
/// lattice.
struct GaugeDraw {
  std::optional<U1GaugeFunction> u1;
  std::optional<SUNGaugeFunction> sun;
};

GaugeDraw draw_gauge(const RunConfig& cfg, const LatticeSpec& spec, std::mt19937_64 rng,
                     bool time_dependent) {
  GaugeDraw g;
  if (cfg.model == ModelKind::u1) {
    if (cfg.gauge == GaugeKind::constant) {
      std::uniform_real_distribution<double> u(-cfg.gauge_amplitude, cfg.gauge_amplitude);
      g.u1 = U1GaugeFunction::constant(spec, u(rng));
    } else {
      g.u1 = U1GaugeFunction::from_smooth(
          spec, SmoothFunction::random(spec, rng, cfg.gauge_amplitude, time_dependent));
    }
  } else if (cfg.gauge == GaugeKind::constant) {
    std::uniform_real_distribution<double> u(-cfg.gauge_amplitude, cfg.gauge_amplitude);
    CMatrix h(cfg.n);
    for (int r = 0; r < cfg.n; ++r) {
      h(r, r) = u(rng);
      for (int c = r + 1; c < cfg.n; ++c) {
        h(r, c) = cplx(u(rng), u(rng));
        h(c, r) = std::conj(h(r, c));
      }
    }
    g.sun = SUNGaugeFunction::constant_generator(spec, h);
  } else {
    g.sun = SUNGaugeFunction::random_smooth(spec, cfg.n, rng, cfg.gauge_amplitude, time_dependent);
  }
  return g;
}

FormInvarianceReport form_check(const GaugeFieldState& st, const GaugeDraw& g, const ModelParams& params,
                                const FormCheckOptions& opt) {
  return g.u1 ? check_form_invariance(st, *g.u1, params, opt) : check_form_invariance(st, *g.sun, params, opt);
}

double row_max(const ComplexField& f, int t) {
  const std::size_t per = f.spec().spatial_sites();
  double m = 0.0;
  for (std::size_t s = t * per; s < (t + 1) * per; ++s)
    for (int c = 0; c < f.components(); ++c) m = std::max(m, std::abs(f(s, c)));
  return m;
}

struct NoetherRun {
  double divergence = 0.0;
  double drift = 0.0;
  double gauss = 0.0;
  double maxwell = 0.0;
  double identity = 0.0;
};

NoetherRun noether_run(const RunConfig& cfg, int k) {
  const LatticeSpec slice = refined_slice(cfg, k);
  const ModelParams params = cfg.params();
  const GaugeFieldState init = initial_state(cfg, slice);
  EvolutionConfig ev = cfg.evolution();
  ev.dt /= k;
  ev.n_steps *= k;
  ev.cadence *= k;
  NoetherRun r;
  ev.on_window = [&](const GaugeFieldState& w, int) {
    const Decomposition d = onshell_decomposition(w, params);
    ComplexField resid(w.spec(), params.n * params.n);
    for (std::size_t s = 0; s < w.sites(); ++s)
      for (int c = 0; c < resid.components(); ++c)
        resid(s, c) = d.direct(s, c) - d.paper_terms(s, c) - d.commutator(s, c);
    r.identity = std::max(r.identity, row_max(resid, w.spec().extent[0] / 2));
  };
  for (const DiagnosticsRecord& rec : evolve(init, ev, params).records) {
    r.divergence = std::max(r.divergence, rec.noether_divergence);
    r.drift = std::max(r.drift, rec.charge_drift);
    r.gauss = std::max(r.gauss, rec.gauss_residual);
    r.maxwell = std::max(r.maxwell, rec.maxwell_residual);
  }
  return r;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& report) {
  require_dynamics(cfg, "simulate");
  header(report, "simulate", cfg);
  const ModelParams params = cfg.params();
  const GaugeFieldState init = initial_state(cfg, cfg.slice());
  EvolutionConfig ev = cfg.evolution();
  if (cfg.form_check) {
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    const GaugeDraw g = draw_gauge(cfg, init.spec(), rng, false);
    ev.form_check = [g, params](const GaugeFieldState& slice) {
      return form_check(slice, g, params, {}).defect;
    };
  }
  const EvolutionResult res = evolve(init, ev, params);

  std::filesystem::create_directories(opt.out_dir);
  const auto csv_path = opt.out_dir / cfg.csv;
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + csv_path.string());
    write_csv(out, res.records);
  }
  report << "records      " << res.records.size() << "\ncsv          " << csv_path.string() << "\n";
  if (!cfg.snapshot_out.empty()) {
    const auto snap = opt.out_dir / cfg.snapshot_out;
    snapshot_write(res.final_state, snap);
    report << "snapshot     " << snap.string() << "\n";
  }
  if (!res.records.empty()) {
    double drift = 0.0, gauss = 0.0, e_lo = res.records.front().energy, e_hi = e_lo;
    for (const DiagnosticsRecord& r : res.records) {
      drift = std::max(drift, r.charge_drift);
      gauss = std::max(gauss, r.gauss_residual);
      e_lo = std::min(e_lo, r.energy);
      e_hi = std::max(e_hi, r.energy);
    }
    report << "energy range " << fmt(e_lo) << " .. " << fmt(e_hi) << "\nmax drift    " << fmt(drift)
           << "\nmax gauss    " << fmt(gauss) << "\n";
  }
  return kExitPass;
}

int cmd_check_invariance(const RunConfig& cfg, const CommandOptions& opt, std::ostream& report) {
  if (cfg.model == ModelKind::u1 && cfg.q == 0.0 && cfg.gauge == GaugeKind::smooth)
    throw ConfigError("check-invariance: a local U(1) transformation needs q != 0");
  header(report, "check-invariance", cfg);
  const ModelParams params = cfg.params();
  const LatticeSpec coarse = refined_spacetime(cfg, 1), fine = refined_spacetime(cfg, opt.refine);
  auto state_on = [&](const LatticeSpec& spec) {
    GaugeFieldState st = new_state(spec, params);
    std::mt19937_64 rng(cfg.seed);
    seed_smooth_random(st, rng, cfg.amplitude);
    return st;
  };
  const GaugeFieldState sc = state_on(coarse), sf = state_on(fine);
  FormCheckOptions fo;
  fo.flip_sign = opt.broken_sign;

  print_study_header(report, opt.refine);
  bool pass = true;
  double worst_fine = 0.0, worst_relative = 0.0, worst_order = 1e300;
  for (int i = 0; i < cfg.draws; ++i) {
    std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(i)};
    const std::mt19937_64 rng(seq);
    const GaugeDraw gc = draw_gauge(cfg, coarse, rng, true);
    const GaugeDraw gf = draw_gauge(cfg, fine, rng, true);
    const FormInvarianceReport rf = form_check(sf, gf, params, fo);
    Study s{"draw " + std::to_string(i + 1), form_check(sc, gc, params, fo).defect, rf.defect, opt.refine};
    if (cfg.gauge == GaugeKind::constant) {
      const bool ok = s.coarse < kExactDefect && s.fine < kExactDefect;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-22s %14.6e %14.6e %8s  %s\n", s.name.c_str(), s.coarse, s.fine, "-",
                    ok ? "ok" : "FAIL");
      report << buf;
      pass = pass && ok;
    } else {
      s.print(report);
      const double relative = rf.max_delta_h > 0.0 ? s.fine / rf.max_delta_h : s.fine;
      pass = pass && s.pass() && relative <= cfg.defect_budget;
      if (!s.exact()) worst_order = std::min(worst_order, s.order());
      worst_relative = std::max(worst_relative, relative);
    }
    worst_fine = std::max(worst_fine, s.fine);
  }
  report << "max fine defect " << fmt(worst_fine) << "\n";
  if (cfg.gauge == GaugeKind::smooth) {
    if (worst_order < 1e300)
      report << "min order       " << fmt(worst_order, "%.3f") << " (required >= " << kMinOrder << ")\n";
    report << "max fine defect / max |dH| " << fmt(worst_relative) << " (budget " << fmt(cfg.defect_budget, "%.1e")
           << ")\n";
  } else {
    report << "constant transformations must be exact to " << fmt(kExactDefect, "%.0e") << "\n";
  }
  report << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitFailure;
}

int cmd_check_noether(const RunConfig& cfg, const CommandOptions& opt, std::ostream& report) {
  header(report, "check-noether", cfg);
  const ModelParams params = cfg.params();
  std::vector<Study> studies;
  if (opt.algebraic_only) {
    auto identity = [&](int k) {
      GaugeFieldState st = new_state(refined_spacetime(cfg, k), params);
      std::mt19937_64 rng(cfg.seed);
      seed_smooth_random(st, rng, cfg.amplitude);
      return onshell_decomposition(st, params).identity_residual();
    };
    studies.push_back({"decomposition identity", identity(1), identity(opt.refine), opt.refine});
    report << "off-shell random state; dynamical residuals skipped\n";
  } else {
    require_dynamics(cfg, "check-noether");
    if (cfg.initial == InitialKind::snapshot)
      throw ConfigError("check-noether refines its initial state and cannot start from a snapshot");
    const NoetherRun c = noether_run(cfg, 1), f = noether_run(cfg, opt.refine);
    studies.push_back({"current divergence", c.divergence, f.divergence, opt.refine});
    studies.push_back({"charge drift", c.drift, f.drift, opt.refine});
    studies.push_back({"gauss residual", c.gauss, f.gauss, opt.refine});
    studies.push_back({"maxwell residual", c.maxwell, f.maxwell, opt.refine});
    studies.push_back({"decomposition identity", c.identity, f.identity, opt.refine});
  }
  print_study_header(report, opt.refine);
  bool pass = true;
  for (const Study& s : studies) {
    s.print(report);
    pass = pass && s.pass();
  }
  report << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitFailure;
}

int cmd_reduce_u1(const RunConfig& cfg, const CommandOptions&, std::ostream& report) {
  require_dynamics(cfg, "reduce-u1");
  if (cfg.n != 1) throw ConfigError("reduce-u1 compares N = 1 paths; set model.n = 1");
  header(report, "reduce-u1", cfg);
  const GaugeFieldState init = initial_state(cfg, cfg.slice());
  const ReductionReport r = reduce_to_u1(init, init, cfg.evolution(), cfg.params());
  const bool pass = r.max_deviation < kReductionTolerance;
  report << "steps          " << r.steps << "\nmax deviation  " << fmt(r.max_deviation) << " (tolerance "
         << fmt(kReductionTolerance, "%.0e") << ")\n"
         << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitFailure;
}

int cmd_dispersion(const RunConfig& cfg, const CommandOptions& opt, std::ostream& report) {
  require_dynamics(cfg, "dispersion");
  header(report, "dispersion", cfg);
  ModelParams params = cfg.params();
  if (params.q != 0.0) report << "note: model.q ignored, the free field runs with q = 0\n";
  params.q = 0.0;
  report << "w_discrete solves (2/dt)^2 sin^2(w dt/2) = m^2 + sin^2(k dx)/dx^2\n";
  char buf[200];
  std::snprintf(buf, sizeof buf, "%6s %12s %12s %18s %18s %18s %12s %12s\n", "sites", "dx", "k", "w_measured",
                "w_discrete", "w_continuum", "|w-w_disc|", "C");
  report << buf;
  bool pass = true;
  std::vector<double> constants;
  for (int k : {1, opt.refine}) {
    const LatticeSpec slice = refined_slice(cfg, k);
    const DispersionResult r =
        measure_dispersion(slice, params, cfg.mode, cfg.amplitude, slice.spacing[0], cfg.dispersion_steps * k);
    const double dx = slice.spacing[1];
    const double gap = std::abs(r.omega_measured - r.omega_discrete);
    const double c = std::abs(r.omega_measured - r.omega_continuum) / (dx * dx);
    constants.push_back(c);
    pass = pass && gap < kDispersionTolerance;
    std::snprintf(buf, sizeof buf, "%6d %12.6e %12.6e %18.12f %18.12f %18.12f %12.3e %12.6f\n",
                  slice.extent[1], dx, r.k, r.omega_measured, r.omega_discrete, r.omega_continuum, gap, c);
    report << buf;
  }
  report << "C = |w_measured - w_continuum| / dx^2 changes by a factor "
         << fmt(constants[1] / constants[0], "%.4f") << " under refinement\n"
         << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitFailure;
}

int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opt,
                std::ostream& report, std::ostream& err) {
  try {
    if (opt.refine < 2) throw ConfigError("--refine must be at least 2");
    cfg.validate();
    if (name == "simulate") return cmd_simulate(cfg, opt, report);
    if (name == "check-invariance") return cmd_check_invariance(cfg, opt, report);
    if (name == "check-noether") return cmd_check_noether(cfg, opt, report);
    if (name == "reduce-u1") return cmd_reduce_u1(cfg, opt, report);
    if (name == "dispersion") return cmd_dispersion(cfg, opt, report);
    err << "unknown command '" << name << "'\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace dwym::cli
