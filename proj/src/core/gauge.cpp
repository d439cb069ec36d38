#include "dwym/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dwym/mat_exp.hpp"

namespace dwym {

namespace {

const cplx I(0.0, 1.0);

bool use_analytic(Derivative how, bool available) {
  if (how == Derivative::analytic && !available)
    throw std::invalid_argument("gauge function carries no analytic derivative");
  return how == Derivative::analytic || (how == Derivative::best && available);
}

/// Stencil derivatives of a field packed as [mu][component].
template <class T>
LatticeField<T> packed_derivatives(const LatticeField<T>& f) {
  const auto d = all_derivatives(f);
  const int dim = f.spec().dim;
  const int c = f.components();
  LatticeField<T> out(f.spec(), dim * c);
  for (std::size_t s = 0; s < f.sites(); ++s)
    for (int mu = 0; mu < dim; ++mu)
      for (int k = 0; k < c; ++k) out(s, mu * c + k) = d[mu](s, k);
  return out;
}

void check_n1(const GaugeFieldState& state, const char* who) {
  if (state.n() != 1)
    throw std::invalid_argument(std::string(who) + ": U(1) transformations need N = 1");
}

void check_match(const GaugeFieldState& state, const ModelParams& params, const LatticeSpec& gspec,
                 const char* who) {
  if (params.n != state.n())
    throw std::invalid_argument(std::string(who) + ": ModelParams N does not match the state");
  if (!(gspec == state.spec()))
    throw std::invalid_argument(std::string(who) + ": gauge function lives on another lattice");
}

}  // namespace

// ---------------------------------------------------------------- U(1)

U1GaugeFunction::U1GaugeFunction(RealField values, std::optional<RealField> gradient)
    : lambda_(std::move(values)), grad_(std::move(gradient)) {
  if (lambda_.components() != 1)
    throw std::invalid_argument("U1GaugeFunction: values must have one component");
  if (grad_ && (grad_->components() != lambda_.spec().dim || !(grad_->spec() == lambda_.spec())))
    throw std::invalid_argument("U1GaugeFunction: gradient does not match the lattice");
}

U1GaugeFunction U1GaugeFunction::from_smooth(const LatticeSpec& spec, const SmoothFunction& f) {
  return U1GaugeFunction(f.sample(spec), f.sample_gradient(spec));
}

U1GaugeFunction U1GaugeFunction::constant(const LatticeSpec& spec, double c) {
  RealField v(spec, 1);
  for (double& x : v.values()) x = c;
  return U1GaugeFunction(std::move(v), RealField(spec, spec.dim));
}

bool U1GaugeFunction::is_constant() const noexcept {
  const auto v = lambda_.values();
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

RealField U1GaugeFunction::gradient(Derivative how) const {
  if (use_analytic(how, has_analytic())) return *grad_;
  return packed_derivatives(lambda_);
}

U1GaugeFunction U1GaugeFunction::scaled(double eps) const {
  RealField v = lambda_;
  for (double& x : v.values()) x *= eps;
  std::optional<RealField> g;
  if (grad_) {
    g = *grad_;
    for (double& x : g->values()) x *= eps;
  }
  return U1GaugeFunction(std::move(v), std::move(g));
}

// ---------------------------------------------------------------- SU(N)

SUNGaugeFunction SUNGaugeFunction::from_unitary(ComplexField u, std::optional<ComplexField> du) {
  SUNGaugeFunction g;
  const int nn = u.components();
  g.n_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(nn))));
  if (g.n_ * g.n_ != nn) throw std::invalid_argument("SUNGaugeFunction: u is not square");
  CVector::check_order(g.n_);
  if (du && (du->components() != u.spec().dim * nn || !(du->spec() == u.spec())))
    throw std::invalid_argument("SUNGaugeFunction: derivative does not match the lattice");
  g.u_ = std::move(u);
  g.du_ = std::move(du);
  return g;
}

SUNGaugeFunction SUNGaugeFunction::from_generator(ComplexField h, std::optional<ComplexField> dh) {
  const LatticeSpec& spec = h.spec();
  const int nn = h.components();
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(nn))));
  if (n * n != nn) throw std::invalid_argument("SUNGaugeFunction: generator is not square");
  CVector::check_order(n);
  ComplexField u(spec, nn);
  std::optional<ComplexField> du;
  if (dh) du.emplace(spec, spec.dim * nn);
  const auto sites = static_cast<std::ptrdiff_t>(spec.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const CMatrix hs = h.matrix(s, 0, n);
    u.set_matrix(s, 0, mat_exp_i(hs, 1.0));
    if (dh)
      for (int mu = 0; mu < spec.dim; ++mu)
        du->set_matrix(s, mu * nn, mat_exp_i_derivative(hs, dh->matrix(s, mu * nn, n)));
  }
  SUNGaugeFunction g = from_unitary(std::move(u), std::move(du));
  g.h_ = std::move(h);
  g.dh_ = std::move(dh);
  return g;
}

SUNGaugeFunction SUNGaugeFunction::from_coefficients(const LatticeSpec& spec, int n,
                                                     const std::vector<SmoothFunction>& theta,
                                                     bool with_identity) {
  const auto basis = algebra_basis(n, with_identity);
  if (theta.size() != basis.size())
    throw std::invalid_argument("from_coefficients: expected " + std::to_string(basis.size()) +
                                " coefficient functions, got " + std::to_string(theta.size()));
  const int nn = n * n;
  ComplexField h(spec, nn), dh(spec, spec.dim * nn);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const RealField v = theta[a].sample(spec);
    const RealField g = theta[a].sample_gradient(spec);
    for (std::size_t s = 0; s < spec.sites(); ++s) {
      h.set_matrix(s, 0, h.matrix(s, 0, n) + v(s, 0) * basis[a]);
      for (int mu = 0; mu < spec.dim; ++mu)
        dh.set_matrix(s, mu * nn, dh.matrix(s, mu * nn, n) + g(s, mu) * basis[a]);
    }
  }
  return from_generator(std::move(h), std::move(dh));
}

SUNGaugeFunction SUNGaugeFunction::random_smooth(const LatticeSpec& spec, int n,
                                                 std::mt19937_64& rng, double amplitude,
                                                 bool time_dependent, bool with_identity) {
  const std::size_t count = algebra_basis(n, with_identity).size();
  std::vector<SmoothFunction> theta;
  for (std::size_t a = 0; a < count; ++a)
    theta.push_back(SmoothFunction::random(spec, rng, amplitude, time_dependent));
  return from_coefficients(spec, n, theta, with_identity);
}

SUNGaugeFunction SUNGaugeFunction::constant(const LatticeSpec& spec, const CMatrix& u) {
  const int nn = u.order() * u.order();
  ComplexField f(spec, nn);
  for (std::size_t s = 0; s < spec.sites(); ++s) f.set_matrix(s, 0, u);
  return from_unitary(std::move(f), ComplexField(spec, spec.dim * nn));
}

SUNGaugeFunction SUNGaugeFunction::constant_generator(const LatticeSpec& spec, const CMatrix& h) {
  const int nn = h.order() * h.order();
  ComplexField f(spec, nn);
  for (std::size_t s = 0; s < spec.sites(); ++s) f.set_matrix(s, 0, h);
  return from_generator(std::move(f), ComplexField(spec, spec.dim * nn));
}

bool SUNGaugeFunction::is_constant() const noexcept {
  const auto v = u_.values();
  const int nn = n_ * n_;
  for (std::size_t s = 1; s < u_.sites(); ++s)
    for (int k = 0; k < nn; ++k)
      if (v[s * nn + k] != v[k]) return false;
  return true;
}

ComplexField SUNGaugeFunction::du(Derivative how) const {
  if (use_analytic(how, has_analytic())) return *du_;
  return packed_derivatives(u_);
}

const ComplexField& SUNGaugeFunction::generator() const {
  if (!h_) throw std::invalid_argument("SUNGaugeFunction: no generator attached");
  return *h_;
}

ComplexField SUNGaugeFunction::dgenerator(Derivative how) const {
  const ComplexField& h = generator();
  if (use_analytic(how, dh_.has_value())) return *dh_;
  return packed_derivatives(h);
}

SUNGaugeFunction SUNGaugeFunction::scaled(double eps) const {
  ComplexField h = generator();
  for (cplx& z : h.values()) z *= eps;
  std::optional<ComplexField> dh;
  if (dh_) {
    dh = *dh_;
    for (cplx& z : dh->values()) z *= eps;
  }
  return from_generator(std::move(h), std::move(dh));
}

SUNGaugeFunction SUNGaugeFunction::inverse() const {
  ComplexField u(spec(), n_ * n_);
  std::optional<ComplexField> du;
  if (du_) du.emplace(spec(), du_->components());
  for (std::size_t s = 0; s < u.sites(); ++s) {
    u.set_matrix(s, 0, this->u(s).adjoint());
    if (du_)
      for (int mu = 0; mu < spec().dim; ++mu)
        du->set_matrix(s, mu * n_ * n_, du_->matrix(s, mu * n_ * n_, n_).adjoint());
  }
  return from_unitary(std::move(u), std::move(du));
}

double SUNGaugeFunction::unitarity_defect() const noexcept {
  double worst = 0.0;
  for (std::size_t s = 0; s < u_.sites(); ++s) {
    const CMatrix m = u(s);
    worst = std::max(worst, (m.adjoint() * m - CMatrix::identity(n_)).max_abs());
  }
  return worst;
}

SUNGaugeFunction product(const SUNGaugeFunction& u2, const SUNGaugeFunction& u1) {
  if (!(u2.spec() == u1.spec()) || u2.n() != u1.n())
    throw std::invalid_argument("product: gauge functions do not match");
  const int n = u1.n();
  const int nn = n * n;
  const LatticeSpec& spec = u1.spec();
  ComplexField u(spec, nn);
  std::optional<ComplexField> du;
  const bool exact = u1.has_analytic() && u2.has_analytic();
  if (exact) du.emplace(spec, spec.dim * nn);
  for (std::size_t s = 0; s < spec.sites(); ++s) {
    const CMatrix a = u2.u(s), b = u1.u(s);
    u.set_matrix(s, 0, a * b);
    if (exact)
      for (int mu = 0; mu < spec.dim; ++mu)
        du->set_matrix(s, mu * nn,
                       u2.du_->matrix(s, mu * nn, n) * b + a * u1.du_->matrix(s, mu * nn, n));
  }
  return SUNGaugeFunction::from_unitary(std::move(u), std::move(du));
}

// ---------------------------------------------------------------- transforms

GaugeFieldState apply_u1(const GaugeFieldState& state, const U1GaugeFunction& gf,
                         const ModelParams& params, Derivative how) {
  check_n1(state, "apply_u1");
  check_match(state, params, gf.spec(), "apply_u1");
  const bool constant = gf.is_constant();
  if (params.q == 0.0 && !constant)
    throw std::invalid_argument("apply_u1: q = 0 makes the potential rule singular");
  const RealField grad = gf.gradient(how);
  GaugeFieldState out = state;
  const int d = state.dim();
  const auto sites = static_cast<std::ptrdiff_t>(state.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const cplx phase = std::polar(1.0, gf.values()(s, 0));
    out.phi_field()(s, 0) *= phase;
    for (int mu = 0; mu < d; ++mu) {
      out.pi_field()(s, mu) *= phase;
      if (!constant) out.a_field()(s, mu) += grad(s, mu) / params.q;
    }
  }
  return out;
}

GaugeFieldState apply_sun(const GaugeFieldState& state, const SUNGaugeFunction& gf,
                          const ModelParams& params, Derivative how) {
  check_match(state, params, gf.spec(), "apply_sun");
  if (gf.n() != state.n()) throw std::invalid_argument("apply_sun: gauge function has wrong N");
  if (gf.unitarity_defect() > 1e-10) throw std::invalid_argument("apply_sun: u is not unitary");
  const bool constant = gf.is_constant();
  if (params.q == 0.0 && !constant)
    throw std::invalid_argument("apply_sun: q = 0 makes the potential rule singular");
  const int n = state.n();
  const int nn = n * n;
  const int d = state.dim();
  const ComplexField du = constant ? ComplexField(gf.spec(), d * nn) : gf.du(how);
  const cplx inv_iq = constant ? cplx(0.0) : 1.0 / (I * params.q);
  GaugeFieldState out = state;
  const auto sites = static_cast<std::ptrdiff_t>(state.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const CMatrix u = gf.u(s);
    const CMatrix ud = u.adjoint();
    out.set_phi(s, u * state.phi(s));
    for (int mu = 0; mu < d; ++mu) {
      out.set_pi(s, mu, u * state.pi(s, mu));
      const CMatrix w = (du.matrix(s, mu * nn, n) * ud).antihermitian_part();
      out.set_a(s, mu, u * state.a(s, mu) * ud + inv_iq * w);
    }
    for (int k = 0; k < pair_count(d); ++k)
      out.p_field().set_matrix(s, k * nn, u * state.p_field().matrix(s, k * nn, n) * ud);
  }
  return out;
}

DensityField delta_h_explicit(const GaugeFieldState& state, const U1GaugeFunction& gf,
                              const ModelParams& params, Derivative how) {
  check_n1(state, "delta_h_explicit");
  check_match(state, params, gf.spec(), "delta_h_explicit");
  if (params.q == 0.0 && !gf.is_constant())
    throw std::invalid_argument("delta_h_explicit: q = 0 makes the potential rule singular");
  const RealField grad = gf.gradient(how);
  DensityField out{RealField(state.spec(), 1), RealField(state.spec(), 1)};
  const auto sites = static_cast<std::ptrdiff_t>(state.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const cplx phi = state.phi_field()(s, 0);
    cplx h = 0.0;
    for (int mu = 0; mu < state.dim(); ++mu) {
      const cplx pi = state.pi_field()(s, mu);
      h += I * (std::conj(pi) * phi - std::conj(phi) * pi) * grad(s, mu);
    }
    out.value(s, 0) = h.real();
    out.imag(s, 0) = h.imag();
  }
  return out;
}

DensityField delta_h_explicit(const GaugeFieldState& state, const SUNGaugeFunction& gf,
                              const ModelParams& params, Derivative how) {
  check_match(state, params, gf.spec(), "delta_h_explicit");
  if (gf.n() != state.n()) throw std::invalid_argument("delta_h_explicit: gauge function has wrong N");
  const bool constant = gf.is_constant();
  if (params.q == 0.0 && !constant)
    throw std::invalid_argument("delta_h_explicit: q = 0 makes the potential rule singular");
  const int n = state.n();
  const int nn = n * n;
  const int d = state.dim();
  DensityField out{RealField(state.spec(), 1), RealField(state.spec(), 1)};
  if (constant) return out;
  const ComplexField du = gf.du(how);
  const cplx i_over_q = I / params.q;
  const auto sites = static_cast<std::ptrdiff_t>(state.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < sites; ++s) {
    const CMatrix u = gf.u(s);
    const CMatrix ud = u.adjoint();
    std::array<CMatrix, kMaxDim> w;
    for (int mu = 0; mu < d; ++mu)
      w[mu] = ud * (du.matrix(s, mu * nn, n) * ud).antihermitian_part() * u;
    const CVector phi = state.phi(s);
    cplx h = 0.0;
    for (int mu = 0; mu < d; ++mu) {
      const CVector pi = state.pi(s, mu);
      h += sandwich(pi, w[mu], phi) - sandwich(phi, w[mu], pi);
    }
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) {
        const CMatrix p = state.p(s, a, b);
        const CMatrix aa = state.a(s, a), ab = state.a(s, b);
        h -= (p * (w[a] * ab + aa * w[b] - w[b] * aa - ab * w[a])).trace();
        h += i_over_q * (p * commutator(w[a], w[b])).trace();
      }
    out.value(s, 0) = h.real();
    out.imag(s, 0) = h.imag();
  }
  return out;
}

namespace {

FormInvarianceReport compare(const DensityField& h_new, const DensityField& h_old,
                             const DensityField& dh, bool flip) {
  FormInvarianceReport r;
  const double sign = flip ? -1.0 : 1.0;
  for (std::size_t s = 0; s < h_new.value.sites(); ++s) {
    const double diff = h_new.value(s, 0) - h_old.value(s, 0) - sign * dh.value(s, 0);
    r.defect = std::max(r.defect, std::abs(diff));
    r.max_delta_h = std::max(r.max_delta_h, std::abs(dh.value(s, 0)));
  }
  return r;
}

}  // namespace

FormInvarianceReport check_form_invariance(const GaugeFieldState& state, const U1GaugeFunction& gf,
                                           const ModelParams& params, const FormCheckOptions& opt) {
  const GaugeFieldState t = apply_u1(state, gf, params, opt.transform);
  FormInvarianceReport r = compare(eval_kgm(t, params), eval_kgm(state, params),
                                   delta_h_explicit(state, gf, params, opt.correction),
                                   opt.flip_sign);
  // P^{ab} D_a D_b Lambda over all ordered pairs
  const auto d1 = all_derivatives(gf.values());
  std::array<std::array<RealField, kMaxDim>, kMaxDim> d2;
  for (int a = 0; a < state.dim(); ++a) d2[a] = all_derivatives(d1[a]);
  for (std::size_t s = 0; s < state.sites(); ++s) {
    cplx sum = 0.0;
    for (int a = 0; a < state.dim(); ++a)
      for (int b = 0; b < state.dim(); ++b)
        if (a != b) sum += t.p(s, a, b)(0, 0) * d2[a][b](s, 0);
    r.skew_cancellation = std::max(r.skew_cancellation, std::abs(sum));
  }
  return r;
}

FormInvarianceReport check_form_invariance(const GaugeFieldState& state, const SUNGaugeFunction& gf,
                                           const ModelParams& params, const FormCheckOptions& opt) {
  const GaugeFieldState t = apply_sun(state, gf, params, opt.transform);
  FormInvarianceReport r = compare(eval_ym(t, params), eval_ym(state, params),
                                   delta_h_explicit(state, gf, params, opt.correction),
                                   opt.flip_sign);
  if (params.q == 0.0) return r;
  const int n = state.n();
  const auto d1 = all_derivatives(gf.u_field());
  std::array<std::array<ComplexField, kMaxDim>, kMaxDim> d2;
  for (int a = 0; a < state.dim(); ++a) d2[a] = all_derivatives(d1[a]);
  const cplx inv_iq = 1.0 / (I * params.q);
  for (std::size_t s = 0; s < state.sites(); ++s) {
    const CMatrix ud = gf.u(s).adjoint();
    cplx sum = 0.0;
    for (int a = 0; a < state.dim(); ++a)
      for (int b = 0; b < state.dim(); ++b)
        if (a != b) sum += (t.p(s, a, b) * d2[b][a].matrix(s, 0, n) * ud).trace();
    r.skew_cancellation = std::max(r.skew_cancellation, std::abs(inv_iq * sum));
  }
  return r;
}

GaugeFieldState apply_infinitesimal(const GaugeFieldState& state, const U1GaugeFunction& gf,
                                    double eps, const ModelParams& params, Derivative how) {
  check_n1(state, "apply_infinitesimal");
  check_match(state, params, gf.spec(), "apply_infinitesimal");
  const bool constant = gf.is_constant();
  if (params.q == 0.0 && !constant)
    throw std::invalid_argument("apply_infinitesimal: q = 0 makes the potential rule singular");
  const RealField grad = gf.gradient(how);
  GaugeFieldState out = state;
  for (std::size_t s = 0; s < state.sites(); ++s) {
    const cplx f = I * eps * gf.values()(s, 0);
    out.phi_field()(s, 0) += f * state.phi_field()(s, 0);
    for (int mu = 0; mu < state.dim(); ++mu) {
      out.pi_field()(s, mu) += f * state.pi_field()(s, mu);
      if (!constant) out.a_field()(s, mu) += eps / params.q * grad(s, mu);
    }
  }
  return out;
}

GaugeFieldState apply_infinitesimal(const GaugeFieldState& state, const SUNGaugeFunction& gf,
                                    double eps, const ModelParams& params, Derivative how) {
  check_match(state, params, gf.spec(), "apply_infinitesimal");
  if (gf.n() != state.n())
    throw std::invalid_argument("apply_infinitesimal: gauge function has wrong N");
  const ComplexField& h = gf.generator();
  const int n = state.n();
  const int nn = n * n;
  const int d = state.dim();
  const ComplexField dh = gf.dgenerator(how);
  bool constant = true;
  for (const cplx& z : dh.values()) constant = constant && z == cplx(0.0);
  if (params.q == 0.0 && !constant)
    throw std::invalid_argument("apply_infinitesimal: q = 0 makes the potential rule singular");
  const cplx ie = I * eps;
  GaugeFieldState out = state;
  for (std::size_t s = 0; s < state.sites(); ++s) {
    const CMatrix hs = h.matrix(s, 0, n);
    out.set_phi(s, state.phi(s) + ie * (hs * state.phi(s)));
    for (int mu = 0; mu < d; ++mu) {
      out.set_pi(s, mu, state.pi(s, mu) + ie * (hs * state.pi(s, mu)));
      CMatrix a = state.a(s, mu) + ie * commutator(hs, state.a(s, mu));
      if (!constant) a += (eps / params.q) * dh.matrix(s, mu * nn, n);
      out.set_a(s, mu, a);
    }
    for (int k = 0; k < pair_count(d); ++k) {
      const CMatrix p = state.p_field().matrix(s, k * nn, n);
      out.p_field().set_matrix(s, k * nn, p + ie * commutator(hs, p));
    }
  }
  return out;
}

}  // namespace dwym
