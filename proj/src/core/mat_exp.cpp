#include "dwym/mat_exp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dwym {

namespace {

using EMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, kMaxOrder, kMaxOrder>;
using EVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxOrder, 1>;

EMat to_eigen(const CMatrix& m) {
  const int n = m.order();
  EMat e(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e(i, j) = m(i, j);
  return e;
}

CMatrix from_eigen(const EMat& e) {
  const int n = static_cast<int>(e.rows());
  CMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = e(i, j);
  return m;
}

void require_hermitian(const CMatrix& h, const char* who) {
  if (!h.is_hermitian(1e-12))
    throw std::invalid_argument(std::string(who) + ": generator is not Hermitian");
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

CMatrix mat_exp_i(const CMatrix& h, double s) {
  require_hermitian(h, "mat_exp_i");
  const EMat eh = to_eigen(h.hermitian_part());
  Eigen::SelfAdjointEigenSolver<EMat> es(eh);
  const EMat& v = es.eigenvectors();
  const EVec& lambda = es.eigenvalues();
  const int n = h.order();
  EMat d = EMat::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::polar(1.0, s * lambda(i));
  return from_eigen(v * d * v.adjoint());
}

CMatrix mat_exp_i_derivative(const CMatrix& h, const CMatrix& dh) {
  require_hermitian(h, "mat_exp_i_derivative");
  const EMat eh = to_eigen(h.hermitian_part());
  Eigen::SelfAdjointEigenSolver<EMat> es(eh);
  const EMat& v = es.eigenvectors();
  const EVec& lambda = es.eigenvalues();
  const int n = h.order();
  EMat g = v.adjoint() * to_eigen(dh) * v;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double mid = 0.5 * (lambda(j) + lambda(k));
      const double half = 0.5 * (lambda(j) - lambda(k));
      // (e^{i l_j} - e^{i l_k}) / (l_j - l_k) written without cancellation
      g(j, k) *= cplx(0.0, 1.0) * std::polar(1.0, mid) * sinc(half);
    }
  return from_eigen(v * g * v.adjoint());
}

cplx determinant(const CMatrix& m) { return to_eigen(m).determinant(); }

std::vector<CMatrix> algebra_basis(int n, bool with_identity) {
  CVector::check_order(n);
  std::vector<CMatrix> basis;
  const cplx i(0.0, 1.0);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      CMatrix sym(n), asym(n);
      sym(j, k) = sym(k, j) = 0.5;
      asym(j, k) = -0.5 * i;
      asym(k, j) = 0.5 * i;
      basis.push_back(sym);
      basis.push_back(asym);
    }
  for (int l = 1; l < n; ++l) {
    CMatrix diag(n);
    const double c = 0.5 * std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) diag(j, j) = c;
    diag(l, l) = -c * l;
    basis.push_back(diag);
  }
  if (with_identity) basis.push_back((1.0 / std::sqrt(2.0 * n)) * CMatrix::identity(n));
  return basis;
}

CMatrix solve_anticommutator(const CMatrix& s, const CMatrix& c) {
  if (!s.is_hermitian(1e-12 * std::max(1.0, s.max_abs())))
    throw std::invalid_argument("solve_anticommutator: S is not Hermitian");
  Eigen::SelfAdjointEigenSolver<EMat> es(to_eigen(s.hermitian_part()));
  const EMat& v = es.eigenvectors();
  const EVec& lambda = es.eigenvalues();
  const int n = s.order();
  const double scale = std::max(1e-300, lambda.cwiseAbs().maxCoeff());
  EMat y = v.adjoint() * to_eigen(c) * v;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double den = lambda(j) + lambda(k);
      if (std::abs(den) < 1e-12 * scale)
        throw std::domain_error("solve_anticommutator: S is singular");
      y(j, k) /= den;
    }
  return from_eigen(v * y * v.adjoint());
}

}  // namespace dwym
