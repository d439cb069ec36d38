#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support/support.hpp"
#include "dwym/field.hpp"
#include "dwym/lattice.hpp"
#include "dwym/mat_exp.hpp"
#include "dwym/noether.hpp"
#include "dwym/smooth.hpp"

using namespace dwym;

namespace {

/// exp(i s h) by its power series; fine for |s h| of order one.
CMatrix exp_series(const CMatrix& h, double s) {
  const int n = h.order();
  CMatrix sum = CMatrix::identity(n), term = CMatrix::identity(n);
  for (int k = 1; k < 60; ++k) {
    term = (cplx(0.0, s) / static_cast<double>(k)) * (term * h);
    sum += term;
  }
  return sum;
}

double max_gap(const CMatrix& a, const CMatrix& b) { return (a - b).max_abs(); }

}  // namespace

TEST(Lattice, SiteNumberingIsSlowestAxisFirst) {
  const LatticeSpec s = LatticeSpec::make(std::vector<int>{4, 5, 6}, std::vector<double>{0.1, 0.2, 0.3});
  EXPECT_EQ(s.sites(), 120u);
  EXPECT_EQ(s.spatial_sites(), 30u);
  EXPECT_EQ(s.stride(2), 1u);
  EXPECT_EQ(s.stride(1), 6u);
  EXPECT_EQ(s.stride(0), 30u);
  for (std::size_t site = 0; site < s.sites(); ++site) EXPECT_EQ(s.index(s.coords(site)), site);
}

TEST(Lattice, ShiftWrapsPeriodically) {
  const LatticeSpec s = LatticeSpec::spacetime(2, 5, 1.0);
  const std::size_t corner = s.index({4, 0, 0, 0});
  EXPECT_EQ(s.coords(s.shift(corner, 0, 1))[0], 0);
  EXPECT_EQ(s.coords(s.shift(corner, 1, -1))[1], 4);
  for (std::size_t site = 0; site < s.sites(); ++site)
    for (int mu = 0; mu < 2; ++mu) EXPECT_EQ(s.shift(s.shift(site, mu, 3), mu, -3), site);
}

TEST(Lattice, ValidationRejectsBadShapes) {
  EXPECT_THROW(LatticeSpec::spacetime(5, 8, 1.0), std::invalid_argument);
  EXPECT_THROW(LatticeSpec::spacetime(2, 3, 1.0), std::invalid_argument);
  EXPECT_THROW(LatticeSpec::spacetime(2, 8, 0.0), std::invalid_argument);
  EXPECT_THROW(LatticeSpec::make(std::vector<int>{2, 8}, std::vector<double>{1, 1}), std::invalid_argument);
  EXPECT_NO_THROW(LatticeSpec::slice(2, 8, 1.0, 0.25));
  EXPECT_TRUE(LatticeSpec::slice(3, 8, 1.0, 0.25).is_slice());
  EXPECT_FALSE(LatticeSpec::slice(2, 8, 1.0, 0.25).differentiable(0));
}

TEST(Lattice, MetricFlipsSpatialComponents) {
  const Metric g{4};
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> low = lower_index<double>(v, g);
  EXPECT_EQ(low, (std::vector<double>{1.0, -2.0, -3.0, -4.0}));
  EXPECT_EQ(raise_index<double>(low, g), v);
  EXPECT_THROW(lower_index<double>(std::vector<double>{1.0, 2.0}, g), std::invalid_argument);
}

TEST(Lattice, PairIndexIsLexicographic) {
  EXPECT_EQ(pair_count(4), 6);
  int k = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) EXPECT_EQ(pair_index(a, b, 4), k++);
  EXPECT_EQ(pair_index(0, 1, 2), 0);
}

TEST(Field, CentralDifferenceConvergesAtSecondOrder) {
  auto error_at = [](int n) {
    const LatticeSpec s = test::box_spacetime(2, n);
    RealField f(s, 1);
    for (std::size_t site = 0; site < s.sites(); ++site)
      f(site, 0) = std::sin(2.0 * s.coordinate(site, 1)) * std::cos(s.coordinate(site, 0));
    const RealField d = central_diff(f, 1);
    double err = 0.0;
    for (std::size_t site = 0; site < s.sites(); ++site) {
      const double exact = 2.0 * std::cos(2.0 * s.coordinate(site, 1)) * std::cos(s.coordinate(site, 0));
      err = std::max(err, std::abs(d(site, 0) - exact));
    }
    return err;
  };
  EXPECT_NEAR(test::order(error_at(32), error_at(64)), 2.0, 0.05);
}

TEST(Field, SliceTimeDerivativeIsZeroAndExplicitRequestThrows) {
  const LatticeSpec s = LatticeSpec::slice(2, 8, 1.0, 0.5);
  ComplexField f(s, 2);
  for (std::size_t site = 0; site < s.sites(); ++site) f(site, 1) = cplx(site, 1.0);
  const auto d = all_derivatives(f);
  EXPECT_EQ(max_abs(d[0]), 0.0);
  EXPECT_GT(max_abs(d[1]), 0.0);
  EXPECT_THROW(central_diff(f, 0), std::invalid_argument);
}

TEST(ComplexMatrix, ProductsAndBrackets) {
  const CMatrix a(2, {1.0, cplx(0, 2), 3.0, 4.0});
  const CMatrix b(2, {0.0, 1.0, 1.0, 0.0});
  const CMatrix ab = a * b;
  EXPECT_EQ(ab(0, 0), cplx(0, 2));
  EXPECT_EQ(ab(1, 1), 3.0);
  EXPECT_TRUE(commutator(a, a) == CMatrix(2));
  EXPECT_EQ(max_gap(commutator(a, b), a * b - b * a), 0.0);
  EXPECT_EQ(a.trace(), 5.0);
  EXPECT_EQ(a.adjoint()(0, 1), 3.0);
  EXPECT_EQ(a.adjoint()(1, 0), cplx(0, -2));

  const CVector x{1.0, cplx(0, 1)};
  const CVector y{2.0, 3.0};
  EXPECT_EQ(dot(x, y), cplx(2.0, -3.0));
  EXPECT_EQ(outer(x, y)(1, 0), cplx(0, 2));
  EXPECT_EQ(sandwich(x, b, y), dot(x, b * y));
}

TEST(ComplexMatrix, OrderIsBounded) {
  EXPECT_THROW(CMatrix(5), std::invalid_argument);
  EXPECT_THROW(CVector(0), std::invalid_argument);
}

TEST(MatExp, MatchesPowerSeriesAndIsUnitary) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 4; ++n) {
    const CMatrix h = test::random_hermitian(n, rng);
    const CMatrix u = mat_exp_i(h, 0.7);
    EXPECT_LT(max_gap(u, exp_series(h, 0.7)), 1e-12) << "n = " << n;
    EXPECT_TRUE(u.is_unitary(1e-13));
    EXPECT_NEAR(std::abs(determinant(u)), 1.0, 1e-13);
  }
  EXPECT_THROW(mat_exp_i(CMatrix(2, {0.0, 1.0, 0.0, 0.0}), 1.0), std::invalid_argument);
}

TEST(MatExp, TracelessGeneratorGivesUnitDeterminant) {
  std::mt19937_64 rng(4);
  const auto basis = algebra_basis(3);
  CMatrix h(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const CMatrix& t : basis) h += u(rng) * t;
  EXPECT_NEAR(std::abs(determinant(mat_exp_i(h, 1.0)) - 1.0), 0.0, 1e-13);
}

TEST(MatExp, DerivativeMatchesCentredDifference) {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 3; ++n) {
    const CMatrix h = test::random_hermitian(n, rng);
    const CMatrix dh = test::random_hermitian(n, rng);
    const double e = 1e-5;
    const CMatrix fd = (1.0 / (2.0 * e)) * (mat_exp_i(h + e * dh, 1.0) - mat_exp_i(h - e * dh, 1.0));
    EXPECT_LT(max_gap(mat_exp_i_derivative(h, dh), fd), 1e-9) << "n = " << n;
  }
}

TEST(MatExp, DerivativeHandlesDegenerateSpectrum) {
  std::mt19937_64 rng(6);
  const CMatrix h = CMatrix::identity(3);
  const CMatrix dh = test::random_hermitian(3, rng);
  // exp(i(1 + x dh)) = e^i exp(i x dh), derivative at 0 is i e^i dh
  const CMatrix expected = (cplx(0, 1) * std::exp(cplx(0, 1))) * dh;
  EXPECT_LT(max_gap(mat_exp_i_derivative(h, dh), expected), 1e-14);
}

TEST(AlgebraBasis, OrthonormalHermitianTraceless) {
  for (int n = 2; n <= 4; ++n) {
    const auto basis = algebra_basis(n, true);
    ASSERT_EQ(static_cast<int>(basis.size()), n * n);
    for (std::size_t a = 0; a < basis.size(); ++a) {
      EXPECT_TRUE(basis[a].is_hermitian());
      if (a + 1 < basis.size()) {
        EXPECT_TRUE(basis[a].is_traceless());
      }
      for (std::size_t b = 0; b < basis.size(); ++b)
        EXPECT_NEAR(std::abs((basis[a] * basis[b]).trace() - (a == b ? 0.5 : 0.0)), 0.0, 1e-14);
    }
  }
  EXPECT_EQ(algebra_basis(2).size(), 3u);
}

TEST(SolveAnticommutator, SolvesAndRejectsSingular) {
  std::mt19937_64 rng(8);
  const CMatrix r = test::random_hermitian(3, rng);
  const CMatrix s = r * r + CMatrix::identity(3);
  const CMatrix c = test::random_hermitian(3, rng);
  const CMatrix x = solve_anticommutator(s, c);
  EXPECT_LT(max_gap(s * x + x * s, c), 1e-12);
  EXPECT_TRUE(x.is_hermitian(1e-12));
  EXPECT_THROW(solve_anticommutator(CMatrix::diagonal({1.0, 0.0}), CMatrix::identity(2)), std::domain_error);
}

TEST(SmoothFunction, DerivativesMatchFiniteDifferences) {
  const LatticeSpec spec = test::box_spacetime(3, 8);
  std::mt19937_64 rng(9);
  const SmoothFunction f = SmoothFunction::random(spec, rng, 1.0, true);
  const std::array<double, kMaxDim> x{0.3, 1.1, 2.5, 0.0};
  const double e = 1e-5;
  for (int mu = 0; mu < 3; ++mu) {
    auto at = [&](double d) {
      auto y = x;
      y[mu] += d;
      return y;
    };
    EXPECT_NEAR(f.derivative(x, mu), (f.value(at(e)) - f.value(at(-e))) / (2 * e), 1e-8);
    for (int nu = 0; nu < 3; ++nu) {
      auto shifted = [&](double d) {
        auto y = x;
        y[mu] += d;
        return f.derivative(y, nu);
      };
      EXPECT_NEAR(f.second_derivative(x, mu, nu), (shifted(e) - shifted(-e)) / (2 * e), 1e-7);
    }
  }
}

TEST(SmoothFunction, PeriodicOnTheBoxAndResolutionIndependent) {
  std::mt19937_64 r1(10), r2(10);
  const SmoothFunction f = SmoothFunction::random(test::box_spacetime(2, 16), r1, 1.0, true);
  const SmoothFunction g = SmoothFunction::random(test::box_spacetime(2, 64), r2, 1.0, true);
  const std::array<double, kMaxDim> x{0.4, 0.9, 0, 0}, y{0.4 + test::kBox, 0.9 - test::kBox, 0, 0};
  EXPECT_NEAR(f.value(x), f.value(y), 1e-12);
  EXPECT_EQ(f.value(x), g.value(x));
}

TEST(SmoothFunction, TimeIndependentOnRequest) {
  std::mt19937_64 rng(12);
  const LatticeSpec spec = test::box_spacetime(2, 16);
  const SmoothFunction f = SmoothFunction::random(spec, rng, 1.0, false);
  EXPECT_EQ(f.derivative({0.2, 0.3, 0, 0}, 0), 0.0);
  EXPECT_TRUE(SmoothFunction::constant(2, 1.5).is_constant());
  EXPECT_EQ(SmoothFunction::constant(2, 1.5).value({0.1, 0.2, 0, 0}), 1.5);
}

TEST(SmoothFunction, SampledGradientMatchesClosedForm) {
  const LatticeSpec spec = test::box_spacetime(2, 16);
  std::mt19937_64 rng(13);
  const SmoothFunction f = SmoothFunction::random(spec, rng, 1.0, true);
  const RealField v = f.sample(spec), g = f.sample_gradient(spec);
  ASSERT_EQ(g.components(), 2);
  for (std::size_t s = 0; s < spec.sites(); s += 7) {
    const auto x = site_position(spec, s);
    EXPECT_EQ(v(s, 0), f.value(x));
    EXPECT_EQ(g(s, 1), f.derivative(x, 1));
  }
}
