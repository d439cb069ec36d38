#include "dwym/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dwym {

namespace {

const cplx I(0.0, 1.0);

void check_params(const GaugeFieldState& state, const ModelParams& params) {
  if (params.n != state.n())
    throw std::invalid_argument("ModelParams N = " + std::to_string(params.n) +
                                " does not match state N = " + std::to_string(state.n()));
}

cplx kinetic_mass(const GaugeFieldState& st, std::size_t s, double m) {
  double h = m * m * st.phi(s).norm_squared();
  for (int mu = 0; mu < st.dim(); ++mu) h += Metric::diag(mu) * st.pi(s, mu).norm_squared();
  return h;
}

/// -1/4 tr(p^{ab} p_{ab}) summed over all a, b
cplx momentum_square(const GaugeFieldState& st, std::size_t s) {
  cplx h = 0.0;
  for (int a = 0; a < st.dim(); ++a)
    for (int b = a + 1; b < st.dim(); ++b) {
      const CMatrix p = st.p(s, a, b);
      h -= 0.5 * Metric::diag(a) * Metric::diag(b) * (p * p).trace();
    }
  return h;
}

cplx coupling(const GaugeFieldState& st, std::size_t s, double q) {
  const CVector phi = st.phi(s);
  cplx c = 0.0;
  for (int mu = 0; mu < st.dim(); ++mu) {
    const CMatrix a = st.a(s, mu);
    const CVector pi = st.pi(s, mu);
    c += sandwich(pi, a, phi) - sandwich(phi, a, pi);
  }
  for (int a = 0; a < st.dim(); ++a)
    for (int b = a + 1; b < st.dim(); ++b)
      c -= (st.p(s, a, b) * commutator(st.a(s, a), st.a(s, b))).trace();
  return I * q * c;
}

template <class F>
DensityField per_site(const GaugeFieldState& st, F&& f) {
  DensityField d{RealField(st.spec(), 1), RealField(st.spec(), 1)};
  const auto n = static_cast<std::ptrdiff_t>(st.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    const cplx h = f(static_cast<std::size_t>(s));
    d.value(s, 0) = h.real();
    d.imag(s, 0) = h.imag();
  }
  return d;
}

}  // namespace

double DensityField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : value.values()) m = std::max(m, std::abs(v));
  return m;
}

double DensityField::imag_residue() const noexcept {
  double m = 0.0;
  for (double v : imag.values()) m = std::max(m, std::abs(v));
  return m / std::max(1.0, max_abs());
}

DensityField eval_free(const GaugeFieldState& state, const ModelParams& params) {
  check_params(state, params);
  return per_site(state, [&](std::size_t s) { return kinetic_mass(state, s, params.m); });
}

DensityField eval_kgm(const GaugeFieldState& state, const ModelParams& params) {
  check_params(state, params);
  if (state.n() != 1)
    throw std::invalid_argument("eval_kgm: needs N = 1, state has N = " + std::to_string(state.n()));
  return per_site(state, [&](std::size_t s) {
    const cplx phi = state.phi_field()(s, 0);
    cplx h = kinetic_mass(state, s, params.m) + momentum_square(state, s);
    for (int mu = 0; mu < state.dim(); ++mu) {
      const cplx pi = state.pi_field()(s, mu);
      const cplx a = state.a_field()(s, mu);
      h += I * params.q * a * (std::conj(pi) * phi - std::conj(phi) * pi);
    }
    return h;
  });
}

DensityField eval_ym(const GaugeFieldState& state, const ModelParams& params) {
  check_params(state, params);
  return per_site(state, [&](std::size_t s) {
    return kinetic_mass(state, s, params.m) + momentum_square(state, s) +
           coupling(state, s, params.q);
  });
}

DensityField evaluate(HamiltonianKind kind, const GaugeFieldState& state,
                      const ModelParams& params) {
  switch (kind) {
    case HamiltonianKind::free: return eval_free(state, params);
    case HamiltonianKind::kgm: return eval_kgm(state, params);
    case HamiltonianKind::ym: break;
  }
  return eval_ym(state, params);
}

DensityField coupling_density(const GaugeFieldState& state, const ModelParams& params) {
  check_params(state, params);
  return per_site(state, [&](std::size_t s) { return coupling(state, s, params.q); });
}

ComplexField MatterGradient::d_phi() const {
  ComplexField f = d_phibar;
  for (cplx& z : f.values()) z = std::conj(z);
  return f;
}

ComplexField MatterGradient::d_pi() const {
  ComplexField f = d_pibar;
  for (cplx& z : f.values()) z = std::conj(z);
  return f;
}

MatterGradient grad_matter(const GaugeFieldState& state, const ModelParams& params,
                           HamiltonianKind kind) {
  check_params(state, params);
  if (kind == HamiltonianKind::kgm && state.n() != 1)
    throw std::invalid_argument("grad_matter: the abelian density needs N = 1");
  const int n = state.n();
  const int d = state.dim();
  const bool coupled = kind != HamiltonianKind::free;
  MatterGradient g{ComplexField(state.spec(), n), ComplexField(state.spec(), d * n)};
  const double m2 = params.m * params.m;
  const auto sites = static_cast<std::ptrdiff_t>(state.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const CVector phi = state.phi(s);
    CVector dphi = m2 * phi;
    for (int mu = 0; mu < d; ++mu) {
      const CVector pi = state.pi(s, mu);
      CVector dpi = Metric::diag(mu) * pi;
      if (coupled) {
        const CMatrix a = state.a(s, mu);
        dphi -= (I * params.q) * (a * pi);
        dpi += (I * params.q) * (a * phi);
      }
      g.d_pibar.set_vector(s, mu * n, dpi);
    }
    g.d_phibar.set_vector(s, 0, dphi);
  }
  return g;
}

DensityField legendre_lagrangian(const GaugeFieldState& state, const ModelParams& params,
                                 HamiltonianKind kind) {
  check_params(state, params);
  if (state.spec().is_slice())
    throw std::invalid_argument("legendre_lagrangian: needs a space-time lattice, got a slice");
  const DensityField h = evaluate(kind, state, params);
  const auto dphi = all_derivatives(state.phi_field());
  const auto da = all_derivatives(state.a_field());
  const int n = state.n();
  const int d = state.dim();
  const bool gauge = kind != HamiltonianKind::free;
  return per_site(state, [&](std::size_t s) {
    cplx l = 0.0;
    for (int mu = 0; mu < d; ++mu) {
      const CVector v = dphi[mu].vector(s, 0, n);
      const CVector pi = state.pi(s, mu);
      l += dot(pi, v) + dot(v, pi);
    }
    if (gauge)
      for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
          const CMatrix curl = da[b].matrix(s, a * n * n, n) - da[a].matrix(s, b * n * n, n);
          l += (state.p(s, a, b) * curl).trace();
        }
    return l - cplx(h.value(s, 0), h.imag(s, 0));
  });
}

double slice_integral(const RealField& f, int t, int c) {
  const LatticeSpec& spec = f.spec();
  if (t < 0 || t >= spec.extent[0])
    throw std::invalid_argument("slice_integral: time row " + std::to_string(t) + " out of range");
  const std::size_t per = spec.spatial_sites();
  const std::size_t base = static_cast<std::size_t>(t) * per;
  double sum = 0.0;
  for (std::size_t s = 0; s < per; ++s) sum += f(base + s, c);
  return sum * spec.spatial_cell_volume();
}

}  // namespace dwym
