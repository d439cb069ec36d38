#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dwym/complex_matrix.hpp"
#include "dwym/field.hpp"
#include "dwym/lattice.hpp"

namespace dwym::test {

inline constexpr double kBox = 2.0 * std::numbers::pi;

/// Space-time lattice of `sites` per axis on the fixed box.
inline LatticeSpec box_spacetime(int dim, int sites) {
  return LatticeSpec::spacetime(dim, sites, kBox / sites);
}

/// Single slice on the fixed box with dt = courant * dx.
inline LatticeSpec box_slice(int sites, double courant = 0.25) {
  const double dx = kBox / sites;
  return LatticeSpec::slice(2, sites, dx, courant * dx);
}

/// Observed order of an error that went from `coarse` to `fine` when the
/// spacing halved.
inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

inline CMatrix random_hermitian(int n, std::mt19937_64& rng, double amp = 1.0) {
  std::uniform_real_distribution<double> u(-amp, amp);
  CMatrix h(n);
  for (int r = 0; r < n; ++r) {
    h(r, r) = u(rng);
    for (int c = r + 1; c < n; ++c) {
      h(r, c) = cplx(u(rng), u(rng));
      h(c, r) = std::conj(h(r, c));
    }
  }
  return h;
}

/// max |f| over the spatial sites of time row t.
inline double row_max(const ComplexField& f, int t) {
  const std::size_t per = f.spec().spatial_sites();
  double m = 0.0;
  for (std::size_t s = t * per; s < (t + 1) * per; ++s)
    for (int c = 0; c < f.components(); ++c) m = std::max(m, std::abs(f(s, c)));
  return m;
}

inline double max_abs(const RealField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace dwym::test
