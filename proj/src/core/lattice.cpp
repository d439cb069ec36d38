#include "dwym/lattice.hpp"

#include <cmath>
#include <string>

namespace dwym {

LatticeSpec LatticeSpec::spacetime(int dim, int sites, double spacing) {
  LatticeSpec s;
  s.dim = dim;
  for (int mu = 0; mu < kMaxDim; ++mu) {
    s.extent[mu] = mu < dim ? sites : 1;
    s.spacing[mu] = mu < dim ? spacing : 1.0;
  }
  s.validate();
  return s;
}

LatticeSpec LatticeSpec::slice(int dim, int sites, double dx, double dt) {
  LatticeSpec s;
  s.dim = dim;
  s.extent[0] = 1;
  s.spacing[0] = dt;
  for (int mu = 1; mu < kMaxDim; ++mu) {
    s.extent[mu] = mu < dim ? sites : 1;
    s.spacing[mu] = mu < dim ? dx : 1.0;
  }
  s.validate();
  return s;
}

LatticeSpec LatticeSpec::make(std::span<const int> extents, std::span<const double> spacings) {
  if (extents.size() != spacings.size())
    throw std::invalid_argument("LatticeSpec: extents and spacings differ in length");
  if (extents.size() < 2 || extents.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("LatticeSpec: dimension must be between 2 and 4");
  LatticeSpec s;
  s.dim = static_cast<int>(extents.size());
  for (int mu = 0; mu < s.dim; ++mu) {
    s.extent[mu] = extents[mu];
    s.spacing[mu] = spacings[mu];
  }
  s.validate();
  return s;
}

void LatticeSpec::validate() const {
  if (dim < 2 || dim > kMaxDim)
    throw std::invalid_argument("LatticeSpec: dimension " + std::to_string(dim) +
                                " outside supported range 2..4");
  for (int mu = 0; mu < dim; ++mu) {
    const bool time_slice = (mu == 0 && extent[0] == 1);
    if (!time_slice && extent[mu] < 4)
      throw std::invalid_argument("LatticeSpec: extent " + std::to_string(extent[mu]) +
                                  " on axis " + std::to_string(mu) + " is below the minimum of 4");
    if (!(spacing[mu] > 0.0) || !std::isfinite(spacing[mu]))
      throw std::invalid_argument("LatticeSpec: spacing on axis " + std::to_string(mu) +
                                  " must be positive and finite");
  }
  for (int mu = dim; mu < kMaxDim; ++mu)
    if (extent[mu] != 1)
      throw std::invalid_argument("LatticeSpec: unused axes must have extent 1");
}

std::size_t LatticeSpec::sites() const noexcept {
  std::size_t n = 1;
  for (int mu = 0; mu < dim; ++mu) n *= static_cast<std::size_t>(extent[mu]);
  return n;
}

std::size_t LatticeSpec::spatial_sites() const noexcept {
  std::size_t n = 1;
  for (int mu = 1; mu < dim; ++mu) n *= static_cast<std::size_t>(extent[mu]);
  return n;
}

std::size_t LatticeSpec::stride(int axis) const noexcept {
  std::size_t s = 1;
  for (int mu = axis + 1; mu < dim; ++mu) s *= static_cast<std::size_t>(extent[mu]);
  return s;
}

std::array<int, kMaxDim> LatticeSpec::coords(std::size_t site) const noexcept {
  std::array<int, kMaxDim> c{0, 0, 0, 0};
  for (int mu = dim - 1; mu >= 0; --mu) {
    c[mu] = static_cast<int>(site % static_cast<std::size_t>(extent[mu]));
    site /= static_cast<std::size_t>(extent[mu]);
  }
  return c;
}

std::size_t LatticeSpec::index(const std::array<int, kMaxDim>& c) const noexcept {
  std::size_t s = 0;
  for (int mu = 0; mu < dim; ++mu) s = s * static_cast<std::size_t>(extent[mu]) + c[mu];
  return s;
}

std::size_t LatticeSpec::shift(std::size_t site, int axis, int step) const noexcept {
  const std::size_t st = stride(axis);
  const int e = extent[axis];
  const int c = static_cast<int>((site / st) % static_cast<std::size_t>(e));
  int cn = (c + step) % e;
  if (cn < 0) cn += e;
  return site + (static_cast<std::ptrdiff_t>(cn) - c) * static_cast<std::ptrdiff_t>(st);
}

double LatticeSpec::spatial_cell_volume() const noexcept {
  double v = 1.0;
  for (int mu = 1; mu < dim; ++mu) v *= spacing[mu];
  return v;
}

int pair_index(int alpha, int beta, int dim) {
  if (alpha < 0 || beta >= dim || alpha >= beta)
    throw std::invalid_argument("pair_index: need 0 <= alpha < beta < dim");
  int idx = 0;
  for (int a = 0; a < alpha; ++a) idx += dim - 1 - a;
  return idx + (beta - alpha - 1);
}

}  // namespace dwym
