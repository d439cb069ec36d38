#include "dwym/complex_matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dwym {

void CVector::throw_bad_order(int n) {
  throw std::invalid_argument("internal dimension " + std::to_string(n) +
                                " outside supported range 1..4");
}

CVector::CVector(std::initializer_list<cplx> v) : n_(static_cast<int>(v.size())) {
  check_order(n_);
  std::copy(v.begin(), v.end(), v_.begin());
}

double CVector::norm_squared() const noexcept {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += std::norm(v_[i]);
  return s;
}

double CVector::max_abs() const noexcept {
  double m = 0.0;
  for (int i = 0; i < n_; ++i) m = std::max(m, std::abs(v_[i]));
  return m;
}


CMatrix::CMatrix(int n, std::initializer_list<cplx> rows) : n_(n) {
  CVector::check_order(n);
  if (rows.size() != static_cast<std::size_t>(n * n))
    throw std::invalid_argument("CMatrix: expected " + std::to_string(n * n) + " entries");
  std::copy(rows.begin(), rows.end(), v_.begin());
}

CMatrix CMatrix::identity(int n) {
  CMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::initializer_list<cplx> d) {
  CMatrix m(static_cast<int>(d.size()));
  int i = 0;
  for (cplx x : d) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

CMatrix CMatrix::adjoint() const noexcept {
  CMatrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cplx CMatrix::trace() const noexcept {
  cplx t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (int i = 0; i < n_ * n_; ++i) m = std::max(m, std::abs(v_[i]));
  return m;
}

double CMatrix::frobenius() const noexcept {
  double s = 0.0;
  for (int i = 0; i < n_ * n_; ++i) s += std::norm(v_[i]);
  return std::sqrt(s);
}

bool CMatrix::is_hermitian(double tol) const noexcept {
  return (*this - adjoint()).max_abs() <= tol;
}

bool CMatrix::is_unitary(double tol) const noexcept {
  return (adjoint() * (*this) - identity(n_)).max_abs() <= tol;
}

bool CMatrix::is_traceless(double tol) const noexcept { return std::abs(trace()) <= tol; }

CMatrix CMatrix::hermitian_part() const noexcept { return 0.5 * (*this + adjoint()); }

CMatrix CMatrix::antihermitian_part() const noexcept { return 0.5 * (*this - adjoint()); }

bool operator==(const CMatrix& a, const CMatrix& b) noexcept {
  if (a.n_ != b.n_) return false;
  return std::equal(a.v_.begin(), a.v_.begin() + a.n_ * a.n_, b.v_.begin());
}


}  // namespace dwym
