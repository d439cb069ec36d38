#include "dwym/reference.hpp"

namespace dwym::reference {

namespace {

const cplx I(0.0, 1.0);

double g(int mu) { return mu == 0 ? 1.0 : -1.0; }

struct View {
  const cplx* phi;
  const cplx* pi;
  const cplx* a;
  const cplx* p;
  int n, d, pairs;

  explicit View(const GaugeFieldState& st)
      : phi(st.phi_field().values().data()),
        pi(st.pi_field().values().data()),
        a(st.a_field().values().data()),
        p(st.p_field().values().data()),
        n(st.n()),
        d(st.dim()),
        pairs(st.dim() * (st.dim() - 1) / 2) {}

  cplx Phi(std::size_t s, int i) const { return phi[s * n + i]; }
  cplx Pi(std::size_t s, int mu, int i) const { return pi[(s * d + mu) * n + i]; }
  cplx A(std::size_t s, int mu, int i, int j) const { return a[((s * d + mu) * n + i) * n + j]; }
  /// full antisymmetric p^{al be}
  cplx P(std::size_t s, int al, int be, int i, int j) const {
    if (al == be) return 0.0;
    const int lo = al < be ? al : be, hi = al < be ? be : al;
    int k = 0;
    for (int x = 0; x < d; ++x)
      for (int y = x + 1; y < d; ++y) {
        if (x == lo && y == hi) {
          const cplx v = p[((s * pairs + k) * n + i) * n + j];
          return al < be ? v : -v;
        }
        ++k;
      }
    return 0.0;
  }
};

cplx free_part(const View& v, std::size_t s, double m) {
  cplx h = 0.0;
  for (int i = 0; i < v.n; ++i) {
    h += m * m * std::conj(v.Phi(s, i)) * v.Phi(s, i);
    for (int mu = 0; mu < v.d; ++mu) h += g(mu) * std::conj(v.Pi(s, mu, i)) * v.Pi(s, mu, i);
  }
  return h;
}

}  // namespace

std::vector<cplx> eval_free(const GaugeFieldState& st, const ModelParams& params) {
  const View v(st);
  std::vector<cplx> out(st.sites());
  for (std::size_t s = 0; s < st.sites(); ++s) out[s] = free_part(v, s, params.m);
  return out;
}

std::vector<cplx> eval_kgm(const GaugeFieldState& st, const ModelParams& params) {
  const View v(st);
  std::vector<cplx> out(st.sites());
  for (std::size_t s = 0; s < st.sites(); ++s) {
    cplx h = free_part(v, s, params.m);
    const cplx f = v.Phi(s, 0);
    for (int al = 0; al < v.d; ++al) {
      const cplx pa = v.Pi(s, al, 0);
      h += I * params.q * v.A(s, al, 0, 0) * (std::conj(pa) * f - std::conj(f) * pa);
      for (int be = 0; be < v.d; ++be)
        h -= 0.25 * v.P(s, al, be, 0, 0) * g(al) * g(be) * v.P(s, al, be, 0, 0);
    }
    out[s] = h;
  }
  return out;
}

std::vector<cplx> eval_ym(const GaugeFieldState& st, const ModelParams& params) {
  const View v(st);
  const int n = v.n;
  std::vector<cplx> out(st.sites());
  for (std::size_t s = 0; s < st.sites(); ++s) {
    cplx h = free_part(v, s, params.m);
    for (int al = 0; al < v.d; ++al)
      for (int be = 0; be < v.d; ++be)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            h -= 0.25 * v.P(s, al, be, j, k) * g(al) * g(be) * v.P(s, al, be, k, j);
    cplx c = 0.0;
    for (int al = 0; al < v.d; ++al)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
          c += std::conj(v.Pi(s, al, k)) * v.A(s, al, k, j) * v.Phi(s, j);
          c -= std::conj(v.Phi(s, k)) * v.A(s, al, k, j) * v.Pi(s, al, j);
        }
    for (int al = 0; al < v.d; ++al)
      for (int be = 0; be < v.d; ++be)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
              c -= v.P(s, al, be, j, k) * v.A(s, al, k, i) * v.A(s, be, i, j);
    out[s] = h + I * params.q * c;
  }
  return out;
}

std::vector<cplx> u1_matter_current(const GaugeFieldState& st, const ModelParams& params) {
  const View v(st);
  std::vector<cplx> out(st.sites() * v.d);
  for (std::size_t s = 0; s < st.sites(); ++s)
    for (int mu = 0; mu < v.d; ++mu) {
      const cplx f = v.Phi(s, 0), p = v.Pi(s, mu, 0);
      out[s * v.d + mu] = I * params.q * (std::conj(p) * f - std::conj(f) * p);
    }
  return out;
}

std::vector<cplx> u1_current(const GaugeFieldState& st, const ModelParams& params,
                             const std::vector<double>& lambda, const std::vector<double>& grad) {
  const View v(st);
  std::vector<cplx> out = u1_matter_current(st, params);
  for (std::size_t s = 0; s < st.sites(); ++s)
    for (int mu = 0; mu < v.d; ++mu) {
      cplx j = out[s * v.d + mu] * lambda[s];
      for (int be = 0; be < v.d; ++be) j += v.P(s, be, mu, 0, 0) * grad[s * v.d + be];
      out[s * v.d + mu] = j;
    }
  return out;
}

std::vector<cplx> sun_gauge_current(const GaugeFieldState& st, const ModelParams& params) {
  const View v(st);
  const int n = v.n;
  std::vector<cplx> out(st.sites() * v.d * n * n);
  for (std::size_t s = 0; s < st.sites(); ++s)
    for (int mu = 0; mu < v.d; ++mu)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          cplx x = v.Phi(s, j) * std::conj(v.Pi(s, mu, k)) - v.Pi(s, mu, j) * std::conj(v.Phi(s, k));
          for (int al = 0; al < v.d; ++al)
            for (int i = 0; i < n; ++i)
              x += v.A(s, al, j, i) * v.P(s, al, mu, i, k) - v.P(s, al, mu, j, i) * v.A(s, al, i, k);
          out[((s * v.d + mu) * n + j) * n + k] = I * params.q * x;
        }
  return out;
}

std::vector<cplx> sun_current(const GaugeFieldState& st, const ModelParams& params,
                              const std::vector<cplx>& h, const std::vector<cplx>& dh) {
  const View v(st);
  const int n = v.n;
  std::vector<cplx> out(st.sites() * v.d);
  auto U = [&](std::size_t s, int i, int j) { return h[(s * n + i) * n + j]; };
  auto dU = [&](std::size_t s, int al, int i, int j) { return dh[((s * v.d + al) * n + i) * n + j]; };
  for (std::size_t s = 0; s < st.sites(); ++s)
    for (int mu = 0; mu < v.d; ++mu) {
      cplx x = 0.0, y = 0.0;
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
          x += std::conj(v.Pi(s, mu, k)) * U(s, k, j) * v.Phi(s, j);
          x -= std::conj(v.Phi(s, k)) * U(s, k, j) * v.Pi(s, mu, j);
          for (int al = 0; al < v.d; ++al) {
            cplx comm = 0.0;
            for (int i = 0; i < n; ++i)
              comm += U(s, k, i) * v.A(s, al, i, j) - v.A(s, al, k, i) * U(s, i, j);
            x += v.P(s, al, mu, j, k) * comm;
            y += v.P(s, al, mu, j, k) * dU(s, al, k, j);
          }
        }
      out[s * v.d + mu] = I * params.q * x + y;
    }
  return out;
}

}  // namespace dwym::reference
