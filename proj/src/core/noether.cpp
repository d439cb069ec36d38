#include "dwym/noether.hpp"

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

/// sum_a D_a p^{a mu} for every mu; unreachable axes are skipped.
std::array<ComplexField, kMaxDim> p_divergence(const GaugeFieldState& state) {
  const int n = state.n();
  const int nn = n * n;
  const int d = state.dim();
  const auto dp = all_derivatives(state.p_field());
  std::array<ComplexField, kMaxDim> out;
  for (int mu = 0; mu < d; ++mu) out[mu] = ComplexField(state.spec(), nn);
  for (int a = 0; a < d; ++a) {
    if (!state.spec().differentiable(a)) continue;
    for (int mu = 0; mu < d; ++mu) {
      if (a == mu) continue;
      const int k = pair_index(std::min(a, mu), std::max(a, mu), d);
      const double sign = a < mu ? 1.0 : -1.0;
      for (std::size_t s = 0; s < state.sites(); ++s)
        for (int c = 0; c < nn; ++c) out[mu](s, c) += sign * dp[a](s, k * nn + c);
    }
  }
  return out;
}

double field_max(const ComplexField& f) noexcept {
  double m = 0.0;
  for (const cplx& z : f.values()) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

CurrentField::CurrentField(const LatticeSpec& spec, int order)
    : j(spec, spec.dim * order * order), n(order) {}

double CurrentField::max_abs() const noexcept { return field_max(j); }

double CurrentField::max_imag() const noexcept {
  double m = 0.0;
  for (const cplx& z : j.values()) m = std::max(m, std::abs(z.imag()));
  return m;
}

double CurrentField::hermiticity_defect() const noexcept {
  double m = 0.0;
  for (std::size_t s = 0; s < j.sites(); ++s)
    for (int mu = 0; mu < spec().dim; ++mu) {
      const CMatrix x = at(s, mu);
      m = std::max(m, (x - x.adjoint()).max_abs());
    }
  return m;
}

double max_abs(const ComplexField& f) noexcept { return field_max(f); }

CurrentField u1_current(const GaugeFieldState& state, const U1GaugeFunction& gf,
                        const ModelParams& params, Derivative how) {
  check_params(state, params);
  if (state.n() != 1) throw std::invalid_argument("u1_current: needs N = 1");
  const RealField grad = gf.gradient(how);
  const int d = state.dim();
  CurrentField out(state.spec(), 1);
  const auto sites = static_cast<std::ptrdiff_t>(state.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const cplx phi = state.phi_field()(s, 0);
    const double lambda = gf.values()(s, 0);
    for (int mu = 0; mu < d; ++mu) {
      const cplx pi = state.pi_field()(s, mu);
      cplx j = I * params.q * (std::conj(pi) * phi - std::conj(phi) * pi) * lambda;
      for (int b = 0; b < d; ++b)
        if (b != mu) j += state.p(s, b, mu)(0, 0) * grad(s, b);
      out.j(s, mu) = j;
    }
  }
  return out;
}

CurrentField u1_matter_current(const GaugeFieldState& state, const ModelParams& params) {
  check_params(state, params);
  if (state.n() != 1) throw std::invalid_argument("u1_matter_current: needs N = 1");
  CurrentField out(state.spec(), 1);
  const auto sites = static_cast<std::ptrdiff_t>(state.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const cplx phi = state.phi_field()(s, 0);
    for (int mu = 0; mu < state.dim(); ++mu) {
      const cplx pi = state.pi_field()(s, mu);
      out.j(s, mu) = I * params.q * (std::conj(pi) * phi - std::conj(phi) * pi);
    }
  }
  return out;
}

CurrentField sun_current(const GaugeFieldState& state, const SUNGaugeFunction& gf,
                         const ModelParams& params, Derivative how) {
  check_params(state, params);
  if (gf.n() != state.n()) throw std::invalid_argument("sun_current: gauge function has wrong N");
  const ComplexField& h = gf.generator();
  const ComplexField dh = gf.dgenerator(how);
  const int n = state.n();
  const int nn = n * n;
  const int d = state.dim();
  CurrentField out(state.spec(), 1);
  const auto sites = static_cast<std::ptrdiff_t>(state.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const CMatrix hs = h.matrix(s, 0, n);
    const CVector phi = state.phi(s);
    for (int mu = 0; mu < d; ++mu) {
      const CVector pi = state.pi(s, mu);
      cplx inner = sandwich(pi, hs, phi) - sandwich(phi, hs, pi);
      cplx deriv = 0.0;
      for (int a = 0; a < d; ++a) {
        if (a == mu) continue;
        const CMatrix p = state.p(s, a, mu);
        inner += (p * commutator(hs, state.a(s, a))).trace();
        deriv += (p * dh.matrix(s, a * nn, n)).trace();
      }
      out.j(s, mu) = I * params.q * inner + deriv;
    }
  }
  return out;
}

CurrentField sun_gauge_current(const GaugeFieldState& state, const ModelParams& params) {
  check_params(state, params);
  const int d = state.dim();
  CurrentField out(state.spec(), state.n());
  const auto sites = static_cast<std::ptrdiff_t>(state.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const CVector phi = state.phi(s);
    for (int mu = 0; mu < d; ++mu) {
      const CVector pi = state.pi(s, mu);
      CMatrix m = outer(phi, pi) - outer(pi, phi);
      for (int a = 0; a < d; ++a)
        if (a != mu) m += commutator(state.a(s, a), state.p(s, a, mu));
      out.set(s, mu, (I * params.q) * m);
    }
  }
  return out;
}

ComplexField divergence(const CurrentField& j) {
  const LatticeSpec& spec = j.spec();
  const int nn = j.n * j.n;
  for (int mu = 0; mu < spec.dim; ++mu)
    if (!spec.differentiable(mu))
      throw std::invalid_argument("divergence: axis " + std::to_string(mu) +
                                  " has too few sites; stack slices into a window first");
  ComplexField out(spec, nn);
  const auto dj = all_derivatives(j.j);
  for (int mu = 0; mu < spec.dim; ++mu)
    for (std::size_t s = 0; s < spec.sites(); ++s)
      for (int c = 0; c < nn; ++c) out(s, c) += dj[mu](s, mu * nn + c);
  return out;
}

CurrentField maxwell_residual(const GaugeFieldState& state, const ModelParams& params) {
  const CurrentField j = sun_gauge_current(state, params);
  const auto dp = p_divergence(state);
  CurrentField r(state.spec(), state.n());
  const int nn = state.n() * state.n();
  for (std::size_t s = 0; s < state.sites(); ++s)
    for (int mu = 0; mu < state.dim(); ++mu)
      for (int c = 0; c < nn; ++c) r.j(s, mu * nn + c) = dp[mu](s, c) - j.j(s, mu * nn + c);
  return r;
}

ComplexField double_divergence(const GaugeFieldState& state) {
  const int n = state.n();
  const int nn = n * n;
  const int d = state.dim();
  ComplexField out(state.spec(), nn);
  const auto dp = all_derivatives(state.p_field());
  for (int a = 0; a < d; ++a) {
    if (!state.spec().differentiable(a)) continue;
    const auto ddp = all_derivatives(dp[a]);
    for (int b = 0; b < d; ++b) {
      if (a == b || !state.spec().differentiable(b)) continue;
      const int k = pair_index(std::min(a, b), std::max(a, b), d);
      const double sign = a < b ? 1.0 : -1.0;
      for (std::size_t s = 0; s < state.sites(); ++s)
        for (int c = 0; c < nn; ++c) out(s, c) += sign * ddp[b](s, k * nn + c);
    }
  }
  return out;
}

double Decomposition::identity_residual() const noexcept {
  double m = 0.0;
  const auto a = direct.values(), b = paper_terms.values(), c = commutator.values();
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i] - c[i]));
  return m;
}

double Decomposition::max_direct() const noexcept { return field_max(direct); }
double Decomposition::max_paper_terms() const noexcept { return field_max(paper_terms); }

Decomposition onshell_decomposition(const GaugeFieldState& state, const ModelParams& params) {
  check_params(state, params);
  const LatticeSpec& spec = state.spec();
  const int n = state.n();
  const int nn = n * n;
  const int d = state.dim();
  const double q = params.q;

  // (1/iq) j^mu, assembled without the prefactor so that q = 0 is allowed
  CurrentField jt(spec, n);
  for (std::size_t s = 0; s < state.sites(); ++s) {
    const CVector phi = state.phi(s);
    for (int mu = 0; mu < d; ++mu) {
      const CVector pi = state.pi(s, mu);
      CMatrix m = outer(phi, pi) - outer(pi, phi);
      for (int a = 0; a < d; ++a)
        if (a != mu) m += commutator(state.a(s, a), state.p(s, a, mu));
      jt.set(s, mu, m);
    }
  }
  Decomposition out{divergence(jt), ComplexField(spec, nn), ComplexField(spec, nn)};

  const auto dphi = all_derivatives(state.phi_field());
  const auto dpi = all_derivatives(state.pi_field());
  const auto da = all_derivatives(state.a_field());
  const CurrentField r = maxwell_residual(state, params);

  const auto sites = static_cast<std::ptrdiff_t>(state.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const CVector phi = state.phi(s);
    CMatrix t(n);
    CVector div_pi(n);
    for (int a = 0; a < d; ++a) {
      const CMatrix aa = state.a(s, a);
      const CVector pi = state.pi(s, a);
      // d_a phi - iq a_a phi, the residual partner of pi_a
      const CVector cov = dphi[a].vector(s, 0, n) - (I * q) * (aa * phi);
      t += outer(cov, pi) - outer(pi, cov);
      div_pi += dpi[a].vector(s, a * n, n) - (I * q) * (aa * pi);
    }
    t += outer(phi, div_pi) - outer(div_pi, phi);
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) {
        const CMatrix aa = state.a(s, a), ab = state.a(s, b);
        // F_{ba} = d_b a_a - d_a a_b + iq (a_a a_b - a_b a_a)
        const CMatrix f = da[b].matrix(s, a * nn, n) - da[a].matrix(s, b * nn, n) +
                          (I * q) * commutator(aa, ab);
        const CMatrix p = state.p(s, a, b);
        t += f * p - p * f;
      }
    out.paper_terms.set_matrix(s, 0, t);
    CMatrix c(n);
    for (int a = 0; a < d; ++a) c -= commutator(state.a(s, a), r.at(s, a));
    out.commutator.set_matrix(s, 0, c);
  }
  return out;
}

CMatrix total_charge(const CurrentField& j, int t) {
  const LatticeSpec& spec = j.spec();
  if (t < 0 || t >= spec.extent[0])
    throw std::invalid_argument("total_charge: time row " + std::to_string(t) + " out of range");
  const std::size_t per = spec.spatial_sites();
  const std::size_t base = static_cast<std::size_t>(t) * per;
  CMatrix q(j.n);
  for (std::size_t s = 0; s < per; ++s) q += j.at(base + s, 0);
  return spec.spatial_cell_volume() * q;
}

}  // namespace dwym
