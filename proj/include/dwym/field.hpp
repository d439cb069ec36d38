#pragma once

#include <cstring>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <vector>

#include "dwym/complex_matrix.hpp"
#include "dwym/lattice.hpp"

namespace dwym {

/// `components` values of type T at every lattice site, site-major.
///
/// Scalar, vector and matrix-valued fields are all expressed through the
/// component count: a D-vector of N x N matrices has D*N*N components, laid
/// out as [mu][row][col].
template <class T>
class LatticeField {
 public:
  LatticeField() = default;
  LatticeField(const LatticeSpec& spec, int components)
      : spec_(spec), comps_(components), data_(spec.sites() * static_cast<std::size_t>(components)) {}

  const LatticeSpec& spec() const noexcept { return spec_; }
  int components() const noexcept { return comps_; }
  std::size_t sites() const noexcept { return spec_.sites(); }

  T* site(std::size_t s) noexcept { return data_.data() + s * comps_; }
  const T* site(std::size_t s) const noexcept { return data_.data() + s * comps_; }
  T& operator()(std::size_t s, int c) noexcept { return data_[s * comps_ + c]; }
  const T& operator()(std::size_t s, int c) const noexcept { return data_[s * comps_ + c]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  /// Matrix of order n starting at component `offset`.
  CMatrix matrix(std::size_t s, int offset, int n) const noexcept
    requires std::is_same_v<T, cplx>
  {
    CMatrix m(n);
    std::memcpy(m.data(), site(s) + offset, sizeof(cplx) * n * n);
    return m;
  }
  void set_matrix(std::size_t s, int offset, const CMatrix& m) noexcept
    requires std::is_same_v<T, cplx>
  {
    std::memcpy(site(s) + offset, m.data(), sizeof(cplx) * m.order() * m.order());
  }
  CVector vector(std::size_t s, int offset, int n) const noexcept
    requires std::is_same_v<T, cplx>
  {
    CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = (*this)(s, offset + i);
    return v;
  }
  void set_vector(std::size_t s, int offset, const CVector& v) noexcept
    requires std::is_same_v<T, cplx>
  {
    for (int i = 0; i < v.size(); ++i) (*this)(s, offset + i) = v[i];
  }

  /// Bitwise comparison; distinguishes -0.0 from 0.0 and compares NaN payloads.
  bool bitwise_equal(const LatticeField& o) const noexcept {
    return spec_ == o.spec_ && comps_ == o.comps_ && data_.size() == o.data_.size() &&
           std::memcmp(data_.data(), o.data_.data(), data_.size() * sizeof(T)) == 0;
  }

 private:
  LatticeSpec spec_{};
  int comps_ = 0;
  std::vector<T> data_;
};

using ComplexField = LatticeField<cplx>;
using RealField = LatticeField<double>;

/// Second-order centred difference along `mu` with periodic wrap:
/// (f(x + e_mu) - f(x - e_mu)) / (2 dx_mu), applied to every component.
template <class T>
LatticeField<T> central_diff(const LatticeField<T>& f, int mu) {
  const LatticeSpec& spec = f.spec();
  if (mu < 0 || mu >= spec.dim)
    throw std::invalid_argument("central_diff: direction " + std::to_string(mu) + " out of range");
  if (!spec.differentiable(mu))
    throw std::invalid_argument("central_diff: extent " + std::to_string(spec.extent[mu]) +
                                " along axis " + std::to_string(mu) + " is below 3");
  LatticeField<T> out(spec, f.components());
  const int comps = f.components();
  const double inv = 1.0 / (2.0 * spec.spacing[mu]);
  const auto n = static_cast<std::ptrdiff_t>(spec.sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    const T* fp = f.site(spec.shift(s, mu, +1));
    const T* fm = f.site(spec.shift(s, mu, -1));
    T* o = out.site(s);
    for (int c = 0; c < comps; ++c) o[c] = (fp[c] - fm[c]) * inv;
  }
  return out;
}

/// Derivatives along every axis; axes that cannot be differentiated (the
/// time axis of a slice) yield a zero field.
template <class T>
std::array<LatticeField<T>, kMaxDim> all_derivatives(const LatticeField<T>& f) {
  std::array<LatticeField<T>, kMaxDim> d;
  for (int mu = 0; mu < f.spec().dim; ++mu)
    d[mu] = f.spec().differentiable(mu) ? central_diff(f, mu)
                                        : LatticeField<T>(f.spec(), f.components());
  return d;
}

}  // namespace dwym
