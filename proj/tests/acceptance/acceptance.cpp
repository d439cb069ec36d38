// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/support.hpp"
#include "dwym/diagnostics.hpp"
#include "dwym/dynamics.hpp"
#include "dwym/gauge.hpp"
#include "dwym/hamiltonian.hpp"
#include "dwym/noether.hpp"
#include "dwym/reference.hpp"
#include "dwym/smooth.hpp"
#include "dwym/snapshot.hpp"
#include "dwym/state.hpp"

using namespace dwym;
using dwym::test::order;

namespace tol {
constexpr double kMinOrder = 1.8;
constexpr double kExactDefect = 1e-10;
constexpr double kMinImprovement = 3.4;
/// Charge drift below this is rounding; there is nothing left to converge.
constexpr double kDriftFloor = 1e-11;
constexpr double kDoubleDivergence = 1e-12;
constexpr double kReduction = 1e-10;
constexpr double kDiscreteDispersion = 1e-6;
/// C = |w - w_continuum| / dx^2 may change by at most this factor.
constexpr double kDispersionConstantSpread = 1.25;
constexpr double kInfinitesimalLow = 80.0;
constexpr double kInfinitesimalHigh = 120.0;
constexpr double kOracleRelative = 1e-12;
constexpr double kHermiticity = 1e-10;
}  // namespace tol

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- 1 and 2

constexpr int kGaugeDraws = 20;

Outcome form_u1() {
  Outcome out;
  const ModelParams params{1, 0.5, 1.0};
  const LatticeSpec coarse = test::box_spacetime(2, 64), fine = test::box_spacetime(2, 128);
  auto state_on = [&](const LatticeSpec& spec) {
    GaugeFieldState st = new_state(spec, params);
    std::mt19937_64 rng(11);
    seed_smooth_random(st, rng, 0.5);
    return st;
  };
  const GaugeFieldState sc = state_on(coarse), sf = state_on(fine);

  double worst = 1e9, worst_analytic = 0.0;
  std::mt19937_64 rng(101);
  for (int i = 0; i < kGaugeDraws; ++i) {
    const SmoothFunction f = SmoothFunction::random(coarse, rng, 1.0, true);
    const auto gc = U1GaugeFunction::from_smooth(coarse, f);
    const auto gf = U1GaugeFunction::from_smooth(fine, f);
    const double dc = check_form_invariance(sc, gc, params).defect;
    const double df = check_form_invariance(sf, gf, params).defect;
    worst = std::min(worst, order(dc, df));
    FormCheckOptions exact;
    exact.transform = Derivative::analytic;
    worst_analytic = std::max(worst_analytic, check_form_invariance(sc, gc, params, exact).defect);
  }
  const double constant = check_form_invariance(sc, U1GaugeFunction::constant(coarse, 0.7), params).defect;
  out.require(worst >= tol::kMinOrder, "min order " + fmt("%.3f", worst));
  out.require(worst_analytic < tol::kExactDefect, "analytic-derivative defect " + fmt("%.2e", worst_analytic));
  out.require(constant < tol::kExactDefect, "constant defect " + fmt("%.2e", constant));
  return out;
}

Outcome form_sun() {
  Outcome out;
  for (int n : {2, 3}) {
    const ModelParams params{n, 0.5, 1.0};
    const LatticeSpec coarse = test::box_spacetime(2, 64), fine = test::box_spacetime(2, 128);
    auto state_on = [&](const LatticeSpec& spec) {
      GaugeFieldState st = new_state(spec, params);
      std::mt19937_64 rng(12 + n);
      seed_smooth_random(st, rng, 0.5);
      return st;
    };
    const GaugeFieldState sc = state_on(coarse), sf = state_on(fine);
    double worst = 1e9;
    for (int i = 0; i < kGaugeDraws; ++i) {
      std::mt19937_64 rc(1000 + 37 * i + n), rf = rc;
      const auto gc = SUNGaugeFunction::random_smooth(coarse, n, rc, 1.0, true);
      const auto gf = SUNGaugeFunction::random_smooth(fine, n, rf, 1.0, true);
      const double dc = check_form_invariance(sc, gc, params).defect;
      const double df = check_form_invariance(sf, gf, params).defect;
      worst = std::min(worst, order(dc, df));
    }
    std::mt19937_64 rng(7);
    const auto cu = SUNGaugeFunction::constant_generator(coarse, test::random_hermitian(n, rng));
    const double constant = check_form_invariance(sc, cu, params).defect;
    const std::string tag = "SU(" + std::to_string(n) + ") ";
    out.require(worst >= tol::kMinOrder, tag + "min order " + fmt("%.3f", worst));
    out.require(constant < tol::kExactDefect, tag + "constant defect " + fmt("%.2e", constant));
  }
  return out;
}

// ---------------------------------------------------------------- 3, 4, 5

struct RunSummary {
  double divergence = 0.0;
  double drift = 0.0;
  double maxwell = 0.0;
  double identity = 0.0;
  double direct = 0.0;
  double paper = 0.0;
};

/// Coupled run over ten crossing times of the box with dt = dx / 4.
RunSummary coupled_run(int n, int sites) {
  const ModelParams params{n, 0.5, 1.0};
  const LatticeSpec slice = test::box_slice(sites);
  std::mt19937_64 rng(2024 + n);
  const GaugeFieldState init = coupled_initial_state(slice, params, rng);
  EvolutionConfig cfg;
  cfg.dt = slice.spacing[0];
  cfg.n_steps = 40 * sites;
  cfg.cadence = sites / 4;
  RunSummary r;
  cfg.on_window = [&](const GaugeFieldState& w, int) {
    const Decomposition d = onshell_decomposition(w, params);
    ComplexField resid(w.spec(), n * n);
    for (std::size_t s = 0; s < w.sites(); ++s)
      for (int c = 0; c < n * n; ++c) resid(s, c) = d.direct(s, c) - d.paper_terms(s, c) - d.commutator(s, c);
    r.identity = std::max(r.identity, test::row_max(resid, 2));
    r.direct = std::max(r.direct, test::row_max(d.direct, 2));
    r.paper = std::max(r.paper, test::row_max(d.paper_terms, 2));
  };
  const EvolutionResult res = evolve(init, cfg, params);
  for (const DiagnosticsRecord& rec : res.records) {
    r.divergence = std::max(r.divergence, rec.noether_divergence);
    r.drift = std::max(r.drift, rec.charge_drift);
    r.maxwell = std::max(r.maxwell, rec.maxwell_residual);
  }
  return r;
}

struct RunPair {
  RunSummary coarse, fine;
};

const RunPair& runs(int n) {
  static std::vector<std::pair<int, RunPair>> cache;
  for (const auto& [k, v] : cache)
    if (k == n) return v;
  cache.emplace_back(n, RunPair{coupled_run(n, 64), coupled_run(n, 128)});
  return cache.back().second;
}

Outcome noether_onshell() {
  Outcome out;
  for (int n : {1, 2}) {
    const RunPair& r = runs(n);
    const std::string tag = n == 1 ? "U(1) " : "SU(2) ";
    const double div = r.coarse.divergence / r.fine.divergence;
    out.require(div >= tol::kMinImprovement, tag + "divergence factor " + fmt("%.2f", div));
    if (r.coarse.drift < tol::kDriftFloor) {
      out.require(r.fine.drift < tol::kDriftFloor,
                  tag + "charge drift at rounding floor " + fmt("%.1e", r.coarse.drift) + " / " +
                      fmt("%.1e", r.fine.drift));
    } else {
      const double drift = r.coarse.drift / r.fine.drift;
      out.require(drift >= tol::kMinImprovement, tag + "charge drift factor " + fmt("%.2f", drift));
    }
  }
  return out;
}

Outcome field_equation() {
  Outcome out;
  for (int n : {1, 2}) {
    const RunPair& r = runs(n);
    const double o = order(r.coarse.maxwell, r.fine.maxwell);
    out.require(o >= tol::kMinOrder, (n == 1 ? "U(1) " : "SU(2) ") + std::string("maxwell order ") + fmt("%.3f", o));
  }
  double worst = 0.0;
  for (int n : {1, 2, 3}) {
    GaugeFieldState st = new_state(LatticeSpec::spacetime(2, 16, 0.3), {n, 0.5, 1.0});
    std::mt19937_64 rng(55 + n);
    seed_uniform_random(st, rng, 1.0);
    worst = std::max(worst, max_abs(double_divergence(st)));
  }
  out.require(worst < tol::kDoubleDivergence, "double divergence " + fmt("%.2e", worst));
  return out;
}

Outcome decomposition() {
  Outcome out;
  const ModelParams params{2, 0.5, 1.0};
  auto offshell = [&](int sites) {
    GaugeFieldState st = new_state(test::box_spacetime(2, sites), params);
    std::mt19937_64 rng(77);
    seed_smooth_random(st, rng, 0.5);
    return onshell_decomposition(st, params).identity_residual();
  };
  const double off = order(offshell(64), offshell(128));
  out.require(off >= tol::kMinOrder, "off-shell identity order " + fmt("%.3f", off));
  const RunPair& r = runs(2);
  const double on = order(r.coarse.identity, r.fine.identity);
  const double direct = order(r.coarse.direct, r.fine.direct);
  const double paper = order(r.coarse.paper, r.fine.paper);
  out.require(on >= tol::kMinOrder, "on-shell identity order " + fmt("%.3f", on));
  out.require(direct >= tol::kMinOrder, "on-shell direct order " + fmt("%.3f", direct));
  out.require(paper >= tol::kMinOrder, "on-shell decomposed order " + fmt("%.3f", paper));
  return out;
}

// ---------------------------------------------------------------- 6

Outcome reduction() {
  Outcome out;
  const ModelParams params{1, 0.5, 1.0};
  const LatticeSpec slice = test::box_slice(64);
  std::mt19937_64 rng(31);
  const GaugeFieldState init = coupled_initial_state(slice, params, rng);
  EvolutionConfig cfg;
  cfg.dt = slice.spacing[0];
  cfg.n_steps = 100;
  const ReductionReport rep = reduce_to_u1(init, init, cfg, params);
  out.require(rep.steps == 100 && rep.max_deviation < tol::kReduction,
              "deviation " + fmt("%.2e", rep.max_deviation) + " over " + std::to_string(rep.steps) + " steps");

  GaugeFieldState st = new_state(LatticeSpec::spacetime(2, 16, 0.3), params);
  seed_uniform_random(st, rng, 1.0);
  const ComplexField coupled = field_strength(st.a_field(), params);
  const ComplexField bare = field_strength(st.a_field(), {1, 0.0, 1.0});
  out.require(coupled.bitwise_equal(bare), "N=1 field strength free of commutator");
  return out;
}

// ---------------------------------------------------------------- 7

Outcome dispersion() {
  Outcome out;
  const ModelParams params{1, 0.0, 1.0};
  double c[2] = {0.0, 0.0};
  int i = 0;
  for (int sites : {64, 128}) {
    const LatticeSpec slice = test::box_slice(sites);
    const DispersionResult r = measure_dispersion(slice, params, 4, 1.0, slice.spacing[0], 400);
    const double discrete = std::abs(r.omega_measured - r.omega_discrete);
    out.require(discrete < tol::kDiscreteDispersion,
                std::to_string(sites) + " sites |w - w_discrete| " + fmt("%.2e", discrete));
    const double dx = slice.spacing[1];
    c[i++] = std::abs(r.omega_measured - r.omega_continuum) / (dx * dx);
  }
  const double spread = std::max(c[0], c[1]) / std::min(c[0], c[1]);
  out.require(spread <= tol::kDispersionConstantSpread,
              "C = " + fmt("%.4f", c[0]) + " -> " + fmt("%.4f", c[1]));
  return out;
}

// ---------------------------------------------------------------- 8

Outcome infinitesimal() {
  Outcome out;
  const LatticeSpec spec = test::box_spacetime(2, 32);
  {
    const ModelParams params{1, 0.5, 1.0};
    GaugeFieldState st = new_state(spec, params);
    std::mt19937_64 rng(5);
    seed_smooth_random(st, rng, 0.5);
    const auto g = U1GaugeFunction::from_smooth(spec, SmoothFunction::random(spec, rng, 1.0, true));
    auto gap = [&](double eps) {
      return apply_u1(st, g.scaled(eps), params, Derivative::analytic)
          .max_deviation(apply_infinitesimal(st, g, eps, params));
    };
    const double ratio = gap(1e-2) / gap(1e-3);
    out.require(ratio >= tol::kInfinitesimalLow && ratio <= tol::kInfinitesimalHigh,
                "U(1) ratio " + fmt("%.2f", ratio));
  }
  {
    const ModelParams params{2, 0.5, 1.0};
    GaugeFieldState st = new_state(spec, params);
    std::mt19937_64 rng(6);
    seed_smooth_random(st, rng, 0.5);
    const auto g = SUNGaugeFunction::random_smooth(spec, 2, rng, 1.0, true);
    auto gap = [&](double eps) {
      return apply_sun(st, g.scaled(eps), params, Derivative::analytic)
          .max_deviation(apply_infinitesimal(st, g, eps, params));
    };
    const double ratio = gap(1e-2) / gap(1e-3);
    out.require(ratio >= tol::kInfinitesimalLow && ratio <= tol::kInfinitesimalHigh,
                "SU(2) ratio " + fmt("%.2f", ratio));
  }
  return out;
}

// ---------------------------------------------------------------- 9

double rel_gap(const std::vector<cplx>& ref, const std::function<cplx(std::size_t)>& got) {
  double scale = 1.0, gap = 0.0;
  for (const cplx& v : ref) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < ref.size(); ++i) gap = std::max(gap, std::abs(ref[i] - got(i)));
  return gap / scale;
}

double density_gap(const std::vector<cplx>& ref, const DensityField& d) {
  return rel_gap(ref, [&](std::size_t s) { return cplx(d.value(s, 0), d.imag(s, 0)); });
}

double current_gap(const std::vector<cplx>& ref, const CurrentField& j) {
  return rel_gap(ref, [&](std::size_t i) { return j.j.values()[i]; });
}

Outcome oracles() {
  Outcome out;
  const LatticeSpec spec = LatticeSpec::spacetime(2, 8, 0.4);
  double worst = 0.0;
  for (int n : {1, 2, 3}) {
    const ModelParams params{n, 0.7, 1.3};
    GaugeFieldState st = new_state(spec, params);
    std::mt19937_64 rng(900 + n);
    seed_uniform_random(st, rng, 1.0);
    worst = std::max(worst, density_gap(reference::eval_free(st, params), eval_free(st, params)));
    worst = std::max(worst, density_gap(reference::eval_ym(st, params), eval_ym(st, params)));
    worst = std::max(worst, current_gap(reference::sun_gauge_current(st, params), sun_gauge_current(st, params)));

    const auto g = SUNGaugeFunction::random_smooth(spec, n, rng, 1.0, true, true);
    const ComplexField& h = g.generator();
    const ComplexField dh = g.dgenerator(Derivative::analytic);
    const std::vector<cplx> hv(h.values().begin(), h.values().end());
    const std::vector<cplx> dhv(dh.values().begin(), dh.values().end());
    worst = std::max(worst, current_gap(reference::sun_current(st, params, hv, dhv),
                                        sun_current(st, g, params, Derivative::analytic)));
    if (n == 1) {
      worst = std::max(worst, density_gap(reference::eval_kgm(st, params), eval_kgm(st, params)));
      worst = std::max(worst, current_gap(reference::u1_matter_current(st, params), u1_matter_current(st, params)));
      const auto lam = U1GaugeFunction::from_smooth(spec, SmoothFunction::random(spec, rng, 1.0, true));
      const RealField grad = lam.gradient(Derivative::analytic);
      const std::vector<double> lv(lam.values().values().begin(), lam.values().values().end());
      const std::vector<double> gv(grad.values().begin(), grad.values().end());
      worst = std::max(worst, current_gap(reference::u1_current(st, params, lv, gv),
                                          u1_current(st, lam, params, Derivative::analytic)));
    }
  }
  out.require(worst < tol::kOracleRelative, "max relative gap " + fmt("%.2e", worst));
  return out;
}

// ---------------------------------------------------------------- 10

bool p_antisymmetric(const GaugeFieldState& st) {
  for (std::size_t s = 0; s < st.sites(); ++s)
    for (int a = 0; a < st.dim(); ++a) {
      if (!(st.p(s, a, a) == CMatrix(st.n()))) return false;
      for (int b = a + 1; b < st.dim(); ++b)
        if (!(st.p(s, b, a) == -st.p(s, a, b))) return false;
    }
  return true;
}

std::string csv_of_run(std::uint64_t seed) {
  const ModelParams params{2, 0.5, 1.0};
  const LatticeSpec slice = test::box_slice(64);
  std::mt19937_64 rng(seed);
  EvolutionConfig cfg;
  cfg.dt = slice.spacing[0];
  cfg.n_steps = 64;
  cfg.cadence = 8;
  std::ostringstream os;
  write_csv(os, evolve(coupled_initial_state(slice, params, rng), cfg, params).records);
  return os.str();
}

Outcome structural() {
  Outcome out;
  const auto dir = std::filesystem::temp_directory_path() / "dwym_acceptance";
  std::filesystem::create_directories(dir);
  bool antisym = true, roundtrip = true;
  double herm = 0.0;
  for (int n : {1, 2, 3}) {
    const ModelParams params{n, 0.5, 1.0};
    const LatticeSpec slice = test::box_slice(32);
    std::mt19937_64 rng(400 + n);
    GaugeFieldState st = coupled_initial_state(slice, params, rng);
    const auto g = SUNGaugeFunction::random_smooth(slice, n, rng, 1.0, false);
    for (int round = 0; round < 3; ++round) {
      st = apply_sun(st, g, params);
      for (int k = 0; k < 5; ++k) step(st, slice.spacing[0], params);
      const auto path = dir / ("state_" + std::to_string(n) + ".dwym");
      snapshot_write(st, path);
      const GaugeFieldState back = snapshot_read(path, n);
      roundtrip = roundtrip && back.bitwise_equal(st);
      st = back;
      antisym = antisym && p_antisymmetric(st);
      herm = std::max({herm, st.hermiticity_defect(), st.p_hermiticity_defect()});
    }
  }
  std::filesystem::remove_all(dir);
  out.require(antisym, "p antisymmetric");
  out.require(herm < tol::kHermiticity, "hermiticity defect " + fmt("%.2e", herm));
  out.require(roundtrip, "snapshot round trip bit-exact");

  const std::string a = csv_of_run(3);
  const int threads = omp_get_max_threads();
  omp_set_num_threads(1);
  const std::string b = csv_of_run(3);
  omp_set_num_threads(threads);
  out.require(a == b, "identical seeds give identical CSV across thread counts");
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"form invariance U(1)", form_u1},
      {"form invariance SU(2), SU(3)", form_sun},
      {"on-shell Noether conservation", noether_onshell},
      {"field equation extraction", field_equation},
      {"decomposition identity", decomposition},
      {"SU(N) to U(1) reduction", reduction},
      {"free-field dispersion", dispersion},
      {"infinitesimal vs finite", infinitesimal},
      {"oracle equivalence", oracles},
      {"structural invariants", structural},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2zu %s  %s (%s) [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
