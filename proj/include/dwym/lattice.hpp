#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dwym {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 4;
inline constexpr int kMaxOrder = 4;

/// Periodic space-time lattice. Axis 0 is time, axes 1..dim-1 are space.
///
/// Sites are numbered site-major with the slowest axis first, i.e. axis 0
/// has the largest stride. A lattice whose time extent is 1 is a single time
/// slice: fields on it carry all D components but may only be differentiated
/// along the spatial axes.
struct LatticeSpec {
  int dim = 2;
  std::array<int, kMaxDim> extent{1, 1, 1, 1};
  std::array<double, kMaxDim> spacing{1.0, 1.0, 1.0, 1.0};

  /// `sites` points along every axis, uniform spacing.
  static LatticeSpec spacetime(int dim, int sites, double spacing);
  /// Single time slice with `sites` points per spatial axis; `dt` is kept as
  /// the time spacing so that stacked slices know their separation.
  static LatticeSpec slice(int dim, int sites, double dx, double dt);
  static LatticeSpec make(std::span<const int> extents, std::span<const double> spacings);

  /// Throws std::invalid_argument unless 2 <= dim <= 4, every spatial extent
  /// is >= 4, the time extent is 1 or >= 4, and every spacing is positive.
  void validate() const;

  bool is_slice() const noexcept { return extent[0] == 1; }
  /// Central differences need three distinct points along the axis.
  bool differentiable(int axis) const noexcept { return extent[axis] >= 3; }

  std::size_t sites() const noexcept;
  std::size_t spatial_sites() const noexcept;
  std::size_t stride(int axis) const noexcept;
  std::array<int, kMaxDim> coords(std::size_t site) const noexcept;
  std::size_t index(const std::array<int, kMaxDim>& c) const noexcept;
  /// Periodic neighbour `step` sites along `axis`.
  std::size_t shift(std::size_t site, int axis, int step) const noexcept;

  double length(int axis) const noexcept { return extent[axis] * spacing[axis]; }
  double coordinate(std::size_t site, int axis) const noexcept {
    return coords(site)[axis] * spacing[axis];
  }
  double spatial_cell_volume() const noexcept;

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

/// Minkowski metric diag(+1, -1, -1, -1) truncated to `dim` axes.
struct Metric {
  int dim = 4;

  static constexpr double diag(int mu) noexcept { return mu == 0 ? 1.0 : -1.0; }
  double operator()(int mu, int nu) const noexcept { return mu == nu ? diag(mu) : 0.0; }
};

template <class T>
std::vector<T> lower_index(std::span<const T> v, const Metric& g) {
  if (static_cast<int>(v.size()) != g.dim)
    throw std::invalid_argument("lower_index: vector has " + std::to_string(v.size()) +
                                " components, metric dimension is " + std::to_string(g.dim));
  std::vector<T> out(v.begin(), v.end());
  for (int mu = 0; mu < g.dim; ++mu) out[mu] *= Metric::diag(mu);
  return out;
}

/// The metric is its own inverse, so raising is the same componentwise flip.
template <class T>
std::vector<T> raise_index(std::span<const T> v, const Metric& g) {
  return lower_index(v, g);
}

inline int pair_count(int dim) noexcept { return dim * (dim - 1) / 2; }

/// Position of the (alpha < beta) pair in the packed antisymmetric storage,
/// lexicographic: (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
int pair_index(int alpha, int beta, int dim);

}  // namespace dwym
