#include "dwym/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dwym/smooth.hpp"

namespace dwym {

void ModelParams::validate() const {
  if (n < 1 || n > kMaxOrder)
    throw std::invalid_argument("ModelParams: N = " + std::to_string(n) +
                                " outside supported range 1..4");
  if (!(m >= 0.0) || !std::isfinite(m))
    throw std::invalid_argument("ModelParams: mass must be finite and non-negative");
  if (!std::isfinite(q)) throw std::invalid_argument("ModelParams: coupling must be finite");
}

GaugeFieldState::GaugeFieldState(const LatticeSpec& spec, const ModelParams& params)
    : spec_(spec),
      params_(params),
      phi_(spec, params.n),
      pi_(spec, spec.dim * params.n),
      a_(spec, spec.dim * params.n * params.n),
      p_(spec, pair_count(spec.dim) * params.n * params.n) {}

CMatrix GaugeFieldState::p(std::size_t s, int alpha, int beta) const {
  const int nn = n() * n();
  if (alpha == beta) return CMatrix(n());
  if (alpha < beta) return p_.matrix(s, pair_index(alpha, beta, dim()) * nn, n());
  return -p_.matrix(s, pair_index(beta, alpha, dim()) * nn, n());
}

void GaugeFieldState::set_p(std::size_t s, int alpha, int beta, const CMatrix& m) {
  if (alpha == beta)
    throw std::invalid_argument("set_p: diagonal entries of an antisymmetric tensor are zero");
  const int nn = n() * n();
  if (alpha < beta)
    p_.set_matrix(s, pair_index(alpha, beta, dim()) * nn, m);
  else
    p_.set_matrix(s, pair_index(beta, alpha, dim()) * nn, -m);
}

namespace {

double matrix_field_defect(const ComplexField& f, int count, int n) {
  double worst = 0.0;
  for (std::size_t s = 0; s < f.sites(); ++s)
    for (int k = 0; k < count; ++k) {
      const CMatrix m = f.matrix(s, k * n * n, n);
      worst = std::max(worst, (m - m.adjoint()).max_abs());
    }
  return worst;
}

double field_deviation(const ComplexField& a, const ComplexField& b) {
  if (a.values().size() != b.values().size())
    throw std::invalid_argument("max_deviation: states have different shapes");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  return worst;
}

}  // namespace

double GaugeFieldState::hermiticity_defect() const noexcept {
  return matrix_field_defect(a_, dim(), n());
}

double GaugeFieldState::p_hermiticity_defect() const noexcept {
  return matrix_field_defect(p_, pair_count(dim()), n());
}

bool GaugeFieldState::bitwise_equal(const GaugeFieldState& o) const noexcept {
  return params_ == o.params_ && phi_.bitwise_equal(o.phi_) && pi_.bitwise_equal(o.pi_) &&
         a_.bitwise_equal(o.a_) && p_.bitwise_equal(o.p_);
}

double GaugeFieldState::max_deviation(const GaugeFieldState& o) const {
  if (!(spec_ == o.spec_) || n() != o.n())
    throw std::invalid_argument("max_deviation: states live on different lattices");
  return std::max({field_deviation(phi_, o.phi_), field_deviation(pi_, o.pi_),
                   field_deviation(a_, o.a_), field_deviation(p_, o.p_)});
}

GaugeFieldState new_state(const LatticeSpec& spec, const ModelParams& params) {
  spec.validate();
  params.validate();
  return GaugeFieldState(spec, params);
}

CMatrix hermitian_from_reals(int n, const double* r) {
  CMatrix h(n);
  int k = 0;
  for (int i = 0; i < n; ++i) h(i, i) = r[k++];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      h(i, j) = cplx(r[k], r[k + 1]);
      h(j, i) = cplx(r[k], -r[k + 1]);
      k += 2;
    }
  return h;
}

void seed_plane_wave(GaugeFieldState& state, const PlaneWave& wave) {
  const LatticeSpec& spec = state.spec();
  const int n = state.n();
  const int d = state.dim();
  for (int mu = 1; mu < d; ++mu)
    if (2 * std::abs(wave.mode[mu]) > spec.extent[mu])
      throw std::invalid_argument("seed_plane_wave: mode " + std::to_string(wave.mode[mu]) +
                                  " on axis " + std::to_string(mu) + " beyond Nyquist");
  std::array<double, kMaxDim> k{0.0, 0.0, 0.0, 0.0};
  double k2 = 0.0;
  for (int mu = 1; mu < d; ++mu) {
    k[mu] = 2.0 * std::numbers::pi * wave.mode[mu] / spec.length(mu);
    k2 += k[mu] * k[mu];
  }
  const double q = state.params().q;
  const double m = state.params().m;
  const double omega = std::sqrt(k2 + m * m);
  const cplx i(0.0, 1.0);

  if (wave.target == SeedTarget::gauge) {
    if (wave.component < 0 || wave.component >= n || wave.column < 0 || wave.column >= n ||
        wave.direction < 0 || wave.direction >= d)
      throw std::invalid_argument("seed_plane_wave: gauge entry out of range");
    for (std::size_t s = 0; s < state.sites(); ++s) {
      const auto x = site_position(spec, s);
      double ph = 0.0;
      for (int mu = 1; mu < d; ++mu) ph += k[mu] * x[mu];
      CMatrix e(n);
      e(wave.component, wave.column) = wave.amplitude * std::polar(1.0, ph);
      state.set_a(s, wave.direction, state.a(s, wave.direction) + e.hermitian_part());
    }
    return;
  }

  if (wave.component < 0 || wave.component >= n)
    throw std::invalid_argument("seed_plane_wave: matter component out of range");
  for (std::size_t s = 0; s < state.sites(); ++s) {
    const auto x = site_position(spec, s);
    double ph = omega * x[0];
    for (int mu = 1; mu < d; ++mu) ph += k[mu] * x[mu];
    CVector f = state.phi(s);
    f[wave.component] += wave.amplitude * std::polar(1.0, ph);
    state.set_phi(s, f);
  }
  // momenta from the covariant derivative of the full phi
  for (std::size_t s = 0; s < state.sites(); ++s) {
    const CVector f = state.phi(s);
    for (int mu = 0; mu < d; ++mu) {
      CVector dphi(n);
      const auto x = site_position(spec, s);
      double ph = omega * x[0];
      for (int nu = 1; nu < d; ++nu) ph += k[nu] * x[nu];
      const double w = mu == 0 ? omega : k[mu];
      dphi[wave.component] = i * w * wave.amplitude * std::polar(1.0, ph);
      CVector pi_lower = dphi - (i * q) * (state.a(s, mu) * f);
      CVector old = state.pi(s, mu);
      // contravariant storage: raise with the diagonal metric
      state.set_pi(s, mu, old + Metric::diag(mu) * pi_lower);
    }
  }
}

void seed_uniform_random(GaugeFieldState& state, std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  const int n = state.n();
  for (cplx& z : state.phi_field().values()) z = cplx(u(rng), u(rng));
  for (cplx& z : state.pi_field().values()) z = cplx(u(rng), u(rng));
  std::array<double, kMaxOrder * kMaxOrder> r{};
  for (std::size_t s = 0; s < state.sites(); ++s) {
    for (int mu = 0; mu < state.dim(); ++mu) {
      for (int k = 0; k < n * n; ++k) r[k] = u(rng);
      state.set_a(s, mu, hermitian_from_reals(n, r.data()));
    }
    for (int pr = 0; pr < pair_count(state.dim()); ++pr) {
      for (int k = 0; k < n * n; ++k) r[k] = u(rng);
      state.p_field().set_matrix(s, pr * n * n, hermitian_from_reals(n, r.data()));
    }
  }
}

void seed_smooth_random(GaugeFieldState& state, std::mt19937_64& rng, double amplitude,
                        bool time_dependent) {
  const LatticeSpec& spec = state.spec();
  const int n = state.n();
  const int d = state.dim();
  auto draw = [&] { return SmoothFunction::random(spec, rng, amplitude, time_dependent); };

  auto fill_complex = [&](ComplexField& f) {
    for (int c = 0; c < f.components(); ++c) {
      const RealField re = draw().sample(spec);
      const RealField im = draw().sample(spec);
      for (std::size_t s = 0; s < spec.sites(); ++s) f(s, c) = cplx(re(s, 0), im(s, 0));
    }
  };
  auto fill_hermitian = [&](ComplexField& f, int count) {
    for (int k = 0; k < count; ++k) {
      std::vector<RealField> reals;
      for (int r = 0; r < n * n; ++r) reals.push_back(draw().sample(spec));
      std::array<double, kMaxOrder * kMaxOrder> buf{};
      for (std::size_t s = 0; s < spec.sites(); ++s) {
        for (int r = 0; r < n * n; ++r) buf[r] = reals[r](s, 0);
        f.set_matrix(s, k * n * n, hermitian_from_reals(n, buf.data()));
      }
    }
  };
  fill_complex(state.phi_field());
  fill_complex(state.pi_field());
  fill_hermitian(state.a_field(), d);
  fill_hermitian(state.p_field(), pair_count(d));
}

}  // namespace dwym
