#pragma once

#include <array>
#include <random>
#include <vector>

#include "dwym/field.hpp"
#include "dwym/lattice.hpp"

namespace dwym {

/// Real periodic function f(x) = c + sum_m A_m cos(k_m . x + phase_m) with
/// closed-form derivatives.
///
/// Wave numbers are stored as integer mode vectors against a physical box, so
/// the same function can be sampled on lattices of different resolution that
/// share the box lengths.
class SmoothFunction {
 public:
  struct Mode {
    std::array<int, kMaxDim> n{0, 0, 0, 0};
    double amplitude = 0.0;
    double phase = 0.0;
  };

  SmoothFunction() = default;
  SmoothFunction(int dim, std::array<double, kMaxDim> box, double offset, std::vector<Mode> modes);

  static SmoothFunction constant(int dim, double c);

  /// `modes` terms, each mode number in 0..3 per axis (never all zero),
  /// amplitudes uniform in [-amplitude, amplitude]. With `time_dependent`
  /// false the time mode is always zero.
  static SmoothFunction random(const LatticeSpec& spec, std::mt19937_64& rng, double amplitude,
                               bool time_dependent, int modes = 3);

  double value(const std::array<double, kMaxDim>& x) const noexcept;
  double derivative(const std::array<double, kMaxDim>& x, int mu) const noexcept;
  double second_derivative(const std::array<double, kMaxDim>& x, int mu, int nu) const noexcept;

  bool is_constant() const noexcept { return modes_.empty(); }
  int dim() const noexcept { return dim_; }

  RealField sample(const LatticeSpec& spec) const;
  /// Component mu holds df/dx^mu.
  RealField sample_gradient(const LatticeSpec& spec) const;

 private:
  double wave(const Mode& m, int mu) const noexcept;
  double phase_at(const Mode& m, const std::array<double, kMaxDim>& x) const noexcept;

  int dim_ = 2;
  std::array<double, kMaxDim> box_{1.0, 1.0, 1.0, 1.0};
  double offset_ = 0.0;
  std::vector<Mode> modes_;
};

/// Physical coordinates of a site; the time coordinate of a slice is 0.
std::array<double, kMaxDim> site_position(const LatticeSpec& spec, std::size_t site);

}  // namespace dwym
