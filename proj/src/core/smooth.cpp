#include "dwym/smooth.hpp"

#include <cmath>
#include <numbers>

namespace dwym {

SmoothFunction::SmoothFunction(int dim, std::array<double, kMaxDim> box, double offset,
                               std::vector<Mode> modes)
    : dim_(dim), box_(box), offset_(offset), modes_(std::move(modes)) {}

SmoothFunction SmoothFunction::constant(int dim, double c) {
  return SmoothFunction(dim, {1.0, 1.0, 1.0, 1.0}, c, {});
}

SmoothFunction SmoothFunction::random(const LatticeSpec& spec, std::mt19937_64& rng,
                                      double amplitude, bool time_dependent, int modes) {
  std::array<double, kMaxDim> box{1.0, 1.0, 1.0, 1.0};
  for (int mu = 0; mu < spec.dim; ++mu) box[mu] = spec.length(mu);
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> amp(-amplitude, amplitude);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
  std::vector<Mode> ms;
  for (int k = 0; k < modes; ++k) {
    Mode m;
    bool any = false;
    while (!any) {
      for (int mu = 0; mu < spec.dim; ++mu) {
        m.n[mu] = (mu == 0 && !time_dependent) ? 0 : pick(rng);
        any = any || m.n[mu] != 0;
      }
    }
    m.amplitude = amp(rng);
    m.phase = ph(rng);
    ms.push_back(m);
  }
  return SmoothFunction(spec.dim, box, amp(rng), std::move(ms));
}

double SmoothFunction::wave(const Mode& m, int mu) const noexcept {
  return 2.0 * std::numbers::pi * m.n[mu] / box_[mu];
}

double SmoothFunction::phase_at(const Mode& m, const std::array<double, kMaxDim>& x) const noexcept {
  double s = m.phase;
  for (int mu = 0; mu < dim_; ++mu) s += wave(m, mu) * x[mu];
  return s;
}

double SmoothFunction::value(const std::array<double, kMaxDim>& x) const noexcept {
  double f = offset_;
  for (const Mode& m : modes_) f += m.amplitude * std::cos(phase_at(m, x));
  return f;
}

double SmoothFunction::derivative(const std::array<double, kMaxDim>& x, int mu) const noexcept {
  double f = 0.0;
  for (const Mode& m : modes_) f -= m.amplitude * wave(m, mu) * std::sin(phase_at(m, x));
  return f;
}

double SmoothFunction::second_derivative(const std::array<double, kMaxDim>& x, int mu,
                                         int nu) const noexcept {
  double f = 0.0;
  for (const Mode& m : modes_)
    f -= m.amplitude * wave(m, mu) * wave(m, nu) * std::cos(phase_at(m, x));
  return f;
}

RealField SmoothFunction::sample(const LatticeSpec& spec) const {
  RealField out(spec, 1);
  const auto n = static_cast<std::ptrdiff_t>(spec.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < n; ++s) out(s, 0) = value(site_position(spec, s));
  return out;
}

RealField SmoothFunction::sample_gradient(const LatticeSpec& spec) const {
  RealField out(spec, spec.dim);
  const auto n = static_cast<std::ptrdiff_t>(spec.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    const auto x = site_position(spec, s);
    for (int mu = 0; mu < spec.dim; ++mu) out(s, mu) = derivative(x, mu);
  }
  return out;
}

std::array<double, kMaxDim> site_position(const LatticeSpec& spec, std::size_t site) {
  std::array<double, kMaxDim> x{0.0, 0.0, 0.0, 0.0};
  const auto c = spec.coords(site);
  for (int mu = 0; mu < spec.dim; ++mu) x[mu] = c[mu] * spec.spacing[mu];
  return x;
}

}  // namespace dwym
