#include "dwym/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>
#include <string>

#include "dwym/diagnostics.hpp"
#include "dwym/mat_exp.hpp"
#include "dwym/noether.hpp"
#include "dwym/smooth.hpp"

namespace dwym {

namespace {

const cplx I(0.0, 1.0);

void require_slice(const GaugeFieldState& state, const char* who) {
  if (state.dim() != 2 || !state.spec().is_slice())
    throw std::invalid_argument(std::string(who) +
                                ": dynamics supports 1+1 dimensional time slices only");
}

void require_temporal_gauge(const GaugeFieldState& state) {
  const int nn = state.n() * state.n();
  for (std::size_t s = 0; s < state.sites(); ++s)
    for (int c = 0; c < nn; ++c)
      if (state.a_field()(s, c) != cplx(0.0))
        throw std::invalid_argument("step: a_0 must vanish (temporal gauge)");
}

void check_finite(const GaugeFieldState& state) {
  for (const ComplexField* f :
       {&state.phi_field(), &state.pi_field(), &state.a_field(), &state.p_field()})
    for (const cplx& z : f->values())
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw NumericalError("non-finite field value during evolution");
}

/// Kicks pi^0 and p^{01} by h times the forces of the current positions.
void kick(GaugeFieldState& st, double h, const ModelParams& params) {
  const int n = st.n();
  const double m2 = params.m * params.m;
  const ComplexField dpi = central_diff(st.pi_field(), 1);
  const auto sites = static_cast<std::ptrdiff_t>(st.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const CVector phi = st.phi(s);
    const CVector pi1 = st.pi(s, 1);
    const CMatrix a1 = st.a(s, 1);
    const CVector div = dpi.vector(s, n, n);
    const CVector force = (-m2) * phi + (I * params.q) * (a1 * pi1) - div;
    st.set_pi(s, 0, st.pi(s, 0) + h * force);
    const CMatrix j1 = (I * params.q) * (outer(phi, pi1) - outer(pi1, phi));
    st.p_field().set_matrix(s, 0, st.p_field().matrix(s, 0, n) + h * j1);
  }
}

void drift(GaugeFieldState& st, double dt) {
  const int n = st.n();
  const int nn = n * n;
  const auto sites = static_cast<std::ptrdiff_t>(st.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    for (int i = 0; i < n; ++i) st.phi_field()(s, i) += dt * st.pi_field()(s, i);
    for (int c = 0; c < nn; ++c) st.a_field()(s, nn + c) -= dt * st.p_field()(s, c);
  }
}

}  // namespace

void EvolutionConfig::validate(const LatticeSpec& spec) const {
  double dx = spec.spacing[1];
  for (int mu = 2; mu < spec.dim; ++mu) dx = std::min(dx, spec.spacing[mu]);
  const double bound = 0.5 * dx;
  if (!std::isfinite(dt) || dt == 0.0 || std::abs(dt) > bound) {
    std::ostringstream msg;
    msg << "dt = " << dt << " violates the CFL bound |dt| <= 0.5 * min spatial spacing = " << bound;
    throw std::invalid_argument(msg.str());
  }
  if (n_steps < 0) throw std::invalid_argument("n_steps must be non-negative");
  if (cadence < 1) throw std::invalid_argument("cadence must be at least 1");
}

ComplexField covariant_momenta(const ComplexField& phi, const ComplexField& a,
                               const ModelParams& params) {
  const LatticeSpec& spec = phi.spec();
  const int n = phi.components();
  const int d = spec.dim;
  const auto dphi = all_derivatives(phi);
  ComplexField pi(spec, d * n);
  const auto sites = static_cast<std::ptrdiff_t>(spec.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const CVector f = phi.vector(s, 0, n);
    for (int mu = 0; mu < d; ++mu) {
      const CVector lower = dphi[mu].vector(s, 0, n) - (I * params.q) * (a.matrix(s, mu * n * n, n) * f);
      pi.set_vector(s, mu * n, Metric::diag(mu) * lower);
    }
  }
  return pi;
}

ComplexField field_strength(const ComplexField& a, const ModelParams& params) {
  const LatticeSpec& spec = a.spec();
  const int d = spec.dim;
  const int n = params.n;
  const int nn = n * n;
  if (a.components() != d * nn)
    throw std::invalid_argument("field_strength: potential does not match N");
  const auto da = all_derivatives(a);
  ComplexField p(spec, pair_count(d) * nn);
  const auto sites = static_cast<std::ptrdiff_t>(spec.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s)
    for (int al = 0; al < d; ++al)
      for (int be = al + 1; be < d; ++be) {
        const CMatrix aa = a.matrix(s, al * nn, n);
        const CMatrix ab = a.matrix(s, be * nn, n);
        CMatrix f = da[be].matrix(s, al * nn, n) - da[al].matrix(s, be * nn, n);
        // the self-coupling term vanishes identically for N = 1
        if (n > 1) f += (I * params.q) * commutator(aa, ab);
        // f = p_{be al}; stored p^{al be} = g g p_{al be} = -g g f
        const double sign = -Metric::diag(al) * Metric::diag(be);
        p.set_matrix(s, pair_index(al, be, d) * nn, sign * f);
      }
  return p;
}

void rebuild_constraints(GaugeFieldState& state, const ModelParams& params) {
  require_slice(state, "rebuild_constraints");
  const int n = state.n();
  const ComplexField dphi = central_diff(state.phi_field(), 1);
  const auto sites = static_cast<std::ptrdiff_t>(state.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const CVector lower = dphi.vector(s, 0, n) - (I * params.q) * (state.a(s, 1) * state.phi(s));
    state.set_pi(s, 1, -1.0 * lower);
  }
}

namespace {

/// f with (f(x+1) - f(x-1)) / (2 dx) = rho(x), per entry, zero mean per chain.
ComplexField integrate_centered(const ComplexField& rho, double dx) {
  const LatticeSpec& spec = rho.spec();
  const int len = spec.extent[1];
  const int comps = rho.components();
  ComplexField f(spec, comps);
  std::vector<char> seen(len, 0);
  for (int start = 0; start < len; ++start) {
    if (seen[start]) continue;
    std::vector<int> chain;
    for (int x = start; !seen[x]; x = (x + 2) % len) {
      seen[x] = 1;
      chain.push_back(x);
    }
    for (int c = 0; c < comps; ++c) {
      // closing the chain needs sum of rho at the interleaved sites to vanish
      cplx total = 0.0;
      double scale = 0.0;
      for (int x : chain) {
        total += rho((x + 1) % len, c);
        scale += std::abs(rho((x + 1) % len, c));
      }
      if (std::abs(total) > 1e-10 * std::max(1.0, scale))
        throw std::invalid_argument("solve_gauss: net charge on periodic lattice");
      const cplx mean_rho = total / static_cast<double>(chain.size());
      cplx v = 0.0;
      cplx mean = 0.0;
      for (std::size_t i = 0; i < chain.size(); ++i) {
        f(chain[i], c) = v;
        mean += v;
        v += 2.0 * dx * (rho((chain[i] + 1) % len, c) - mean_rho);
      }
      mean /= static_cast<double>(chain.size());
      for (int x : chain) f(x, c) -= mean;
    }
  }
  return f;
}

ComplexField matter_charge_density(const GaugeFieldState& st, const ModelParams& params) {
  const int n = st.n();
  ComplexField rho(st.spec(), n * n);
  for (std::size_t s = 0; s < st.sites(); ++s) {
    const CVector phi = st.phi(s), pi = st.pi(s, 0);
    rho.set_matrix(s, 0, (I * params.q) * (outer(phi, pi) - outer(pi, phi)));
  }
  return rho;
}

}  // namespace

void solve_gauss(GaugeFieldState& state, const ModelParams& params) {
  require_slice(state, "solve_gauss");
  const int n = state.n();
  const double dx = state.spec().spacing[1];
  const ComplexField rho_m = matter_charge_density(state, params);
  bool nonabelian = false;
  if (n > 1)
    for (std::size_t s = 0; s < state.sites() && !nonabelian; ++s)
      nonabelian = state.a(s, 1).max_abs() > 0.0;

  // f = p^{10} = -p^{01}; j^0 = rho_m + iq [a_1, f]
  ComplexField f = integrate_centered(rho_m, dx);
  if (nonabelian) {
    bool converged = false;
    for (int it = 0; it < 500 && !converged; ++it) {
      ComplexField rho = rho_m;
      for (std::size_t s = 0; s < state.sites(); ++s)
        rho.set_matrix(s, 0, rho.matrix(s, 0, n) +
                                 (I * params.q) * commutator(state.a(s, 1), f.matrix(s, 0, n)));
      ComplexField next = integrate_centered(rho, dx);
      double change = 0.0, size = 0.0;
      for (std::size_t i = 0; i < next.values().size(); ++i) {
        change = std::max(change, std::abs(next.values()[i] - f.values()[i]));
        size = std::max(size, std::abs(next.values()[i]));
      }
      f = std::move(next);
      converged = change <= 1e-14 * std::max(1.0, size);
    }
    if (!converged) throw std::runtime_error("solve_gauss: fixed-point iteration did not converge");
  }
  for (std::size_t s = 0; s < state.sites(); ++s) state.p_field().set_matrix(s, 0, -f.matrix(s, 0, n));
}

void neutralize_charge(GaugeFieldState& state, const ModelParams& params) {
  require_slice(state, "neutralize_charge");
  if (params.q == 0.0) return;
  const int n = state.n();
  const double dx = state.spec().spatial_cell_volume();
  const CMatrix q = total_charge(sun_gauge_current(state, params), 0);
  CMatrix s(n);
  for (std::size_t x = 0; x < state.sites(); ++x) s += dx * outer(state.phi(x), state.phi(x));
  if (s.trace().real() == 0.0) return;
  // pi^0 -> pi^0 + i L phi shifts the charge by q (S L + L S)
  const CMatrix l = n == 1 ? CMatrix(1, {-q(0, 0).real() / (2.0 * params.q * s(0, 0).real())})
                           : solve_anticommutator(s, (-1.0 / params.q) * q).hermitian_part();
  for (std::size_t x = 0; x < state.sites(); ++x)
    state.set_pi(x, 0, state.pi(x, 0) + I * (l * state.phi(x)));
}

void step(GaugeFieldState& state, double dt, const ModelParams& params) {
  require_slice(state, "step");
  require_temporal_gauge(state);
  kick(state, 0.5 * dt, params);
  drift(state, dt);
  rebuild_constraints(state, params);
  kick(state, 0.5 * dt, params);
  check_finite(state);
}

void step_u1(GaugeFieldState& state, double dt, const ModelParams& params) {
  require_slice(state, "step_u1");
  if (state.n() != 1) throw std::invalid_argument("step_u1: needs N = 1");
  require_temporal_gauge(state);
  const int len = state.spec().extent[1];
  const double inv = 1.0 / (2.0 * state.spec().spacing[1]);
  const double m2 = params.m * params.m;
  const cplx iq = I * params.q;
  cplx* phi = state.phi_field().values().data();
  cplx* pi = state.pi_field().values().data();  // [x][pi^0, pi^1]
  cplx* a = state.a_field().values().data();    // [x][a_0, a_1]
  cplx* p = state.p_field().values().data();    // [x][p^{01}]

  auto kick1 = [&](double h) {
    for (int x = 0; x < len; ++x) {
      const int xp = (x + 1) % len, xm = (x + len - 1) % len;
      const cplx div = (pi[2 * xp + 1] - pi[2 * xm + 1]) * inv;
      const cplx force = -m2 * phi[x] + iq * (a[2 * x + 1] * pi[2 * x + 1]) - div;
      pi[2 * x] += h * force;
      p[x] += h * (iq * (phi[x] * std::conj(pi[2 * x + 1]) - pi[2 * x + 1] * std::conj(phi[x])));
    }
  };
  auto rebuild = [&] {
    for (int x = 0; x < len; ++x) {
      const int xp = (x + 1) % len, xm = (x + len - 1) % len;
      const cplx lower = (phi[xp] - phi[xm]) * inv - iq * (a[2 * x + 1] * phi[x]);
      pi[2 * x + 1] = -1.0 * lower;
    }
  };
  kick1(0.5 * dt);
  for (int x = 0; x < len; ++x) {
    phi[x] += dt * pi[2 * x];
    a[2 * x + 1] -= dt * p[x];
  }
  rebuild();
  kick1(0.5 * dt);
  check_finite(state);
}

double canonical_energy(const GaugeFieldState& slice, const ModelParams& params) {
  require_slice(slice, "canonical_energy");
  const double m2 = params.m * params.m;
  double e = 0.0;
  for (std::size_t s = 0; s < slice.sites(); ++s) {
    const CMatrix p = slice.p(s, 0, 1);
    e += slice.pi(s, 0).norm_squared() + slice.pi(s, 1).norm_squared() +
         m2 * slice.phi(s).norm_squared() + 0.5 * (p * p).trace().real();
  }
  return e * slice.spec().spatial_cell_volume();
}

GaugeFieldState stack_window(const std::vector<GaugeFieldState>& slices, double dt) {
  if (slices.empty()) throw std::invalid_argument("stack_window: no slices");
  const GaugeFieldState& first = slices.front();
  for (const auto& s : slices)
    if (!s.spec().is_slice() || !(s.spec() == first.spec()) || s.n() != first.n())
      throw std::invalid_argument("stack_window: slices do not share one lattice");
  LatticeSpec spec = first.spec();
  spec.extent[0] = static_cast<int>(slices.size());
  spec.spacing[0] = dt;
  spec.validate();
  GaugeFieldState w(spec, first.params());
  const std::size_t per = first.sites();
  for (std::size_t t = 0; t < slices.size(); ++t) {
    const GaugeFieldState& s = slices[t];
    auto copy = [&](const ComplexField& from, ComplexField& to) {
      const int c = from.components();
      std::copy(from.values().begin(), from.values().end(),
                to.values().begin() + static_cast<std::ptrdiff_t>(t * per * c));
    };
    copy(s.phi_field(), w.phi_field());
    copy(s.pi_field(), w.pi_field());
    copy(s.a_field(), w.a_field());
    copy(s.p_field(), w.p_field());
  }
  return w;
}

EvolutionResult evolve(const GaugeFieldState& initial, const EvolutionConfig& cfg,
                       const ModelParams& params) {
  require_slice(initial, "evolve");
  cfg.validate(initial.spec());
  EvolutionResult result;
  std::deque<GaugeFieldState> buf;
  buf.push_back(initial);
  for (int k = 0; k < 2; ++k) {
    GaugeFieldState back = buf.front();
    step(back, -cfg.dt, params);
    buf.push_front(std::move(back));
  }
  int newest = 0;
  if (cfg.n_steps == 0) result.final_state = initial;
  std::optional<DiagnosticsRecord> first;
  while (newest < cfg.n_steps + 2) {
    GaugeFieldState next = buf.back();
    step(next, cfg.dt, params);
    ++newest;
    if (newest == cfg.n_steps) result.final_state = next;
    buf.push_back(std::move(next));
    if (buf.size() > 5) buf.pop_front();
    const int centre = newest - 2;
    if (centre < 0 || centre > cfg.n_steps) continue;
    if (centre % cfg.cadence != 0 && centre != cfg.n_steps) continue;
    const GaugeFieldState window =
        stack_window(std::vector<GaugeFieldState>(buf.begin(), buf.end()), cfg.dt);
    DiagnosticsRecord rec = diagnose_window(window, params, centre, centre * cfg.dt);
    if (!first) first = rec;
    const double scale = std::max(first->charge_matrix.frobenius(), first->charge_scale);
    rec.charge_drift =
        scale > 0.0 ? (rec.charge_matrix - first->charge_matrix).frobenius() / scale : 0.0;
    if (cfg.form_check) rec.form_defect = cfg.form_check(buf[2]);
    if (cfg.on_window) cfg.on_window(window, centre);
    result.records.push_back(rec);
  }
  return result;
}

ReductionReport reduce_to_u1(const GaugeFieldState& sun_state, const GaugeFieldState& u1_state,
                             const EvolutionConfig& cfg, const ModelParams& params) {
  if (sun_state.n() != 1 || u1_state.n() != 1)
    throw std::invalid_argument("reduce_to_u1: both states need N = 1");
  if (!(sun_state.spec() == u1_state.spec()) || !sun_state.bitwise_equal(u1_state))
    throw std::invalid_argument("reduce_to_u1: mismatched initialization");
  cfg.validate(sun_state.spec());
  GaugeFieldState a = sun_state, b = u1_state;
  ReductionReport r;
  for (int k = 0; k < cfg.n_steps; ++k) {
    step(a, cfg.dt, params);
    step_u1(b, cfg.dt, params);
    r.max_deviation = std::max(r.max_deviation, a.max_deviation(b));
    ++r.steps;
  }
  return r;
}

DispersionResult measure_dispersion(const LatticeSpec& slice, const ModelParams& params, int mode,
                                    double amplitude, double dt, int steps) {
  if (params.q != 0.0) throw std::invalid_argument("measure_dispersion: needs q = 0");
  if (steps < 3) throw std::invalid_argument("measure_dispersion: needs at least 3 steps");
  GaugeFieldState st = new_state(slice, params);
  EvolutionConfig cfg;
  cfg.dt = dt;
  cfg.validate(slice);
  PlaneWave w;
  w.mode[1] = mode;
  w.amplitude = amplitude;
  seed_plane_wave(st, w);
  rebuild_constraints(st, params);

  const double dx = slice.spacing[1];
  const double k = 2.0 * std::numbers::pi * mode / slice.length(1);
  auto amplitude_of = [&](const GaugeFieldState& s) {
    cplx c = 0.0;
    for (std::size_t x = 0; x < s.sites(); ++x)
      c += s.phi_field()(x, 0) * std::polar(1.0, -k * static_cast<double>(x) * dx);
    return c;
  };
  std::vector<cplx> c;
  c.push_back(amplitude_of(st));
  for (int i = 0; i < steps; ++i) {
    step(st, dt, params);
    c.push_back(amplitude_of(st));
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    num += (std::conj(c[i]) * (c[i + 1] + c[i - 1])).real();
    den += 2.0 * std::norm(c[i]);
  }
  DispersionResult r;
  r.k = k;
  r.omega_measured = std::acos(std::clamp(num / den, -1.0, 1.0)) / std::abs(dt);
  const double s = std::sin(k * dx) / dx;
  const double rhs = std::sqrt(params.m * params.m + s * s);
  r.omega_discrete = 2.0 / std::abs(dt) * std::asin(std::min(1.0, 0.5 * std::abs(dt) * rhs));
  r.omega_continuum = std::sqrt(k * k + params.m * params.m);
  return r;
}

GaugeFieldState discrete_plane_wave(const LatticeSpec& slice, const ModelParams& params, int mode,
                                    double amplitude, double dt) {
  GaugeFieldState st = new_state(slice, params);
  require_slice(st, "discrete_plane_wave");
  PlaneWave w;
  w.mode[1] = mode;
  w.amplitude = amplitude;
  seed_plane_wave(st, w);
  rebuild_constraints(st, params);
  const double dx = slice.spacing[1];
  const double k = 2.0 * std::numbers::pi * mode / slice.length(1);
  const double s = std::sin(k * dx) / dx;
  const double c = 1.0 - 0.5 * dt * dt * (params.m * params.m + s * s);
  if (std::abs(c) > 1.0)
    throw std::invalid_argument("discrete_plane_wave: dt too large for mode " + std::to_string(mode));
  const double w_eff = std::sqrt(1.0 - c * c) / dt;
  for (std::size_t x = 0; x < st.sites(); ++x) st.pi_field()(x, 0) = I * w_eff * st.phi_field()(x, 0);
  return st;
}

GaugeFieldState coupled_initial_state(const LatticeSpec& slice, const ModelParams& params,
                                      std::mt19937_64& rng, const InitialData& init) {
  GaugeFieldState st = new_state(slice, params);
  require_slice(st, "coupled_initial_state");
  const int n = params.n;
  auto draw = [&] { return SmoothFunction::random(slice, rng, init.amplitude, false).sample(slice); };
  for (int i = 0; i < n; ++i) {
    const RealField re = draw(), im = draw();
    for (std::size_t s = 0; s < st.sites(); ++s) st.phi_field()(s, i) = cplx(re(s, 0), im(s, 0));
  }
  for (int i = 0; i < n; ++i) {
    const RealField re = draw(), im = draw();
    for (std::size_t s = 0; s < st.sites(); ++s) st.pi_field()(s, i) = cplx(re(s, 0), im(s, 0));
  }
  if (init.random_potential && n == 1) {
    const RealField a1 = draw();
    for (std::size_t s = 0; s < st.sites(); ++s) st.a_field()(s, 1) = a1(s, 0);
  }
  rebuild_constraints(st, params);
  neutralize_charge(st, params);
  solve_gauss(st, params);
  return st;
}

}  // namespace dwym
