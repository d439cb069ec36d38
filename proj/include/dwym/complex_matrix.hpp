#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>

#include "dwym/lattice.hpp"

namespace dwym {

namespace detail {

/// Uninitialised inline buffer of K complex values; owners zero and copy
/// only the entries in use.
template <int K>
struct InlineValues {
  alignas(cplx) double raw[2 * K];
  cplx* data() noexcept { return reinterpret_cast<cplx*>(raw); }
  const cplx* data() const noexcept { return reinterpret_cast<const cplx*>(raw); }
  cplx* begin() noexcept { return data(); }
  const cplx* begin() const noexcept { return data(); }
  cplx& operator[](int i) noexcept { return data()[i]; }
  const cplx& operator[](int i) const noexcept { return data()[i]; }
};

}  // namespace detail

/// N-component complex column vector, 1 <= N <= 4. Stored inline.
class CVector {
 public:
  CVector() = default;
  explicit CVector(int n) : n_(n) {
    check_order(n);
    std::fill_n(v_.data(), n, cplx{});
  }
  CVector(const CVector& o) noexcept : n_(o.n_) { std::copy_n(o.v_.data(), n_, v_.data()); }
  CVector& operator=(const CVector& o) noexcept {
    n_ = o.n_;
    std::copy_n(o.v_.data(), n_, v_.data());
    return *this;
  }
  CVector(std::initializer_list<cplx> v);

  int size() const noexcept { return n_; }
  cplx& operator[](int i) noexcept { return v_[i]; }
  const cplx& operator[](int i) const noexcept { return v_[i]; }

  CVector& operator+=(const CVector& o) noexcept;
  CVector& operator-=(const CVector& o) noexcept;
  CVector& operator*=(cplx s) noexcept;

  double norm_squared() const noexcept;
  double max_abs() const noexcept;

  static void check_order(int n) {
    if (n < 1 || n > kMaxOrder) [[unlikely]]
      throw_bad_order(n);
  }
  [[noreturn]] static void throw_bad_order(int n);

 private:
  int n_ = 0;
  detail::InlineValues<kMaxOrder> v_;
};

CVector operator+(CVector a, const CVector& b) noexcept;
CVector operator-(CVector a, const CVector& b) noexcept;
CVector operator*(cplx s, CVector a) noexcept;
/// a^dagger b
cplx dot(const CVector& a, const CVector& b) noexcept;

/// N x N complex matrix, 1 <= N <= 4, row-major, stored inline so that
/// per-site arithmetic never allocates.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(int n) : n_(n) {
    CVector::check_order(n);
    std::fill_n(v_.data(), n * n, cplx{});
  }
  CMatrix(const CMatrix& o) noexcept : n_(o.n_) { std::copy_n(o.v_.data(), n_ * n_, v_.data()); }
  CMatrix& operator=(const CMatrix& o) noexcept {
    n_ = o.n_;
    std::copy_n(o.v_.data(), n_ * n_, v_.data());
    return *this;
  }
  /// Row-major entries; the count must be a perfect square.
  CMatrix(int n, std::initializer_list<cplx> rows);

  static CMatrix identity(int n);
  static CMatrix diagonal(std::initializer_list<cplx> d);

  int order() const noexcept { return n_; }
  cplx& operator()(int r, int c) noexcept { return v_[r * n_ + c]; }
  const cplx& operator()(int r, int c) const noexcept { return v_[r * n_ + c]; }
  cplx* data() noexcept { return v_.data(); }
  const cplx* data() const noexcept { return v_.data(); }

  CMatrix adjoint() const noexcept;
  cplx trace() const noexcept;
  double max_abs() const noexcept;
  double frobenius() const noexcept;

  CMatrix& operator+=(const CMatrix& o) noexcept;
  CMatrix& operator-=(const CMatrix& o) noexcept;
  CMatrix& operator*=(cplx s) noexcept;

  bool is_hermitian(double tol = 1e-12) const noexcept;
  bool is_unitary(double tol = 1e-12) const noexcept;
  bool is_traceless(double tol = 1e-12) const noexcept;

  /// (M + M^dagger) / 2 and (M - M^dagger) / 2.
  CMatrix hermitian_part() const noexcept;
  CMatrix antihermitian_part() const noexcept;

  friend bool operator==(const CMatrix& a, const CMatrix& b) noexcept;

 private:
  int n_ = 0;
  detail::InlineValues<kMaxOrder * kMaxOrder> v_;
};

CMatrix operator+(CMatrix a, const CMatrix& b) noexcept;
CMatrix operator-(CMatrix a, const CMatrix& b) noexcept;
CMatrix operator-(CMatrix a) noexcept;
CMatrix operator*(cplx s, CMatrix a) noexcept;
CMatrix operator*(const CMatrix& a, const CMatrix& b) noexcept;
CVector operator*(const CMatrix& a, const CVector& x) noexcept;
/// [a, b] = ab - ba
CMatrix commutator(const CMatrix& a, const CMatrix& b) noexcept;
/// x y^dagger
CMatrix outer(const CVector& x, const CVector& y) noexcept;
/// x^dagger A y
cplx sandwich(const CVector& x, const CMatrix& a, const CVector& y) noexcept;

inline CVector& CVector::operator+=(const CVector& o) noexcept {
  for (int i = 0; i < n_; ++i) v_[i] += o.v_[i];
  return *this;
}
inline CVector& CVector::operator-=(const CVector& o) noexcept {
  for (int i = 0; i < n_; ++i) v_[i] -= o.v_[i];
  return *this;
}
inline CVector& CVector::operator*=(cplx s) noexcept {
  for (int i = 0; i < n_; ++i) v_[i] *= s;
  return *this;
}
inline CMatrix& CMatrix::operator+=(const CMatrix& o) noexcept {
  for (int i = 0; i < n_ * n_; ++i) v_[i] += o.v_[i];
  return *this;
}
inline CMatrix& CMatrix::operator-=(const CMatrix& o) noexcept {
  for (int i = 0; i < n_ * n_; ++i) v_[i] -= o.v_[i];
  return *this;
}
inline CMatrix& CMatrix::operator*=(cplx s) noexcept {
  for (int i = 0; i < n_ * n_; ++i) v_[i] *= s;
  return *this;
}

inline CVector operator+(CVector a, const CVector& b) noexcept { return a += b; }
inline CVector operator-(CVector a, const CVector& b) noexcept { return a -= b; }
inline CVector operator*(cplx s, CVector a) noexcept { return a *= s; }

inline cplx dot(const CVector& a, const CVector& b) noexcept {
  cplx s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline CMatrix operator+(CMatrix a, const CMatrix& b) noexcept { return a += b; }
inline CMatrix operator-(CMatrix a, const CMatrix& b) noexcept { return a -= b; }
inline CMatrix operator-(CMatrix a) noexcept { return a *= -1.0; }
inline CMatrix operator*(cplx s, CMatrix a) noexcept { return a *= s; }

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) noexcept {
  const int n = a.order();
  CMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

inline CVector operator*(const CMatrix& a, const CVector& x) noexcept {
  const int n = a.order();
  CVector r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i] += a(i, j) * x[j];
  return r;
}

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) noexcept { return a * b - b * a; }

inline CMatrix outer(const CVector& x, const CVector& y) noexcept {
  const int n = x.size();
  CMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = x[i] * std::conj(y[j]);
  return r;
}

inline cplx sandwich(const CVector& x, const CMatrix& a, const CVector& y) noexcept {
  return dot(x, a * y);
}

}  // namespace dwym
