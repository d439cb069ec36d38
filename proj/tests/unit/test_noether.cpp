#include <gtest/gtest.h>

#include <random>

#include "../support/support.hpp"
#include "dwym/noether.hpp"
#include "dwym/state.hpp"

using namespace dwym;

namespace {

GaugeFieldState random_state(const LatticeSpec& spec, const ModelParams& params, std::uint64_t seed) {
  GaugeFieldState st = new_state(spec, params);
  std::mt19937_64 rng(seed);
  seed_uniform_random(st, rng, 1.0);
  return st;
}

GaugeFieldState smooth_state(const LatticeSpec& spec, const ModelParams& params, std::uint64_t seed) {
  GaugeFieldState st = new_state(spec, params);
  std::mt19937_64 rng(seed);
  seed_smooth_random(st, rng, 0.5);
  return st;
}

}  // namespace

TEST(Current, U1MatterCurrentIsTwiceQImPhiBarPi) {
  const ModelParams params{1, 0.7, 1.0};
  const GaugeFieldState st = random_state(LatticeSpec::spacetime(3, 4, 0.5), params, 1);
  const CurrentField j = u1_matter_current(st, params);
  EXPECT_LT(j.max_imag(), 1e-15);
  for (std::size_t s = 0; s < st.sites(); ++s)
    for (int mu = 0; mu < 3; ++mu) {
      const double expected = 2 * 0.7 * std::imag(std::conj(st.phi(s)[0]) * st.pi(s, mu)[0]);
      EXPECT_NEAR(j.at(s, mu)(0, 0).real(), expected, 1e-15);
    }
}

TEST(Current, ConstantPhaseCurrentIsScaledMatterCurrent) {
  const ModelParams params{1, 0.7, 1.0};
  const LatticeSpec spec = LatticeSpec::spacetime(2, 6, 0.5);
  const GaugeFieldState st = random_state(spec, params, 2);
  const CurrentField j = u1_current(st, U1GaugeFunction::constant(spec, 1.5), params);
  const CurrentField j1 = u1_matter_current(st, params);
  for (std::size_t s = 0; s < st.sites(); ++s)
    for (int mu = 0; mu < 2; ++mu) EXPECT_NEAR(std::abs(j.at(s, mu)(0, 0) - 1.5 * j1.at(s, mu)(0, 0)), 0.0, 1e-15);
}

TEST(Current, MatrixCurrentIsHermitianAndReducesAtN1) {
  for (int n : {1, 2, 3}) {
    const ModelParams params{n, 0.6, 1.0};
    const GaugeFieldState st = random_state(LatticeSpec::spacetime(3, 4, 0.5), params, 10 + n);
    EXPECT_LT(sun_gauge_current(st, params).hermiticity_defect(), 1e-14);
  }
  const ModelParams params{1, 0.6, 1.0};
  const GaugeFieldState st = random_state(LatticeSpec::spacetime(3, 4, 0.5), params, 20);
  const CurrentField a = sun_gauge_current(st, params), b = u1_matter_current(st, params);
  for (std::size_t s = 0; s < st.sites(); ++s)
    for (int mu = 0; mu < 3; ++mu) EXPECT_NEAR(std::abs(a.at(s, mu)(0, 0) - b.at(s, mu)(0, 0)), 0.0, 1e-15);
}

TEST(Current, IdentityGeneratorGivesSummedMatterCurrent) {
  // h = 1 commutes with a and has no derivative, leaving the matter bilinear
  const ModelParams params{2, 0.6, 1.0};
  const LatticeSpec spec = LatticeSpec::spacetime(2, 6, 0.5);
  const GaugeFieldState st = random_state(spec, params, 21);
  const auto g = SUNGaugeFunction::constant_generator(spec, CMatrix::identity(2));
  const CurrentField j = sun_current(st, g, params);
  for (std::size_t s = 0; s < st.sites(); ++s)
    for (int mu = 0; mu < 2; ++mu) {
      const CVector f = st.phi(s), p = st.pi(s, mu);
      cplx expected = 0.0;
      for (int i = 0; i < 2; ++i) expected += cplx(0, 0.6) * (std::conj(p[i]) * f[i] - std::conj(f[i]) * p[i]);
      EXPECT_NEAR(std::abs(j.at(s, mu)(0, 0) - expected), 0.0, 1e-14);
    }
}

TEST(Divergence, NeedsEveryAxisDifferentiable) {
  const ModelParams params{1, 1.0, 1.0};
  const GaugeFieldState st = new_state(LatticeSpec::slice(2, 8, 1.0, 0.1), params);
  EXPECT_THROW(divergence(u1_matter_current(st, params)), std::invalid_argument);
}

TEST(Divergence, DoubleDivergenceOfPVanishes) {
  for (int d : {2, 3, 4}) {
    const ModelParams params{2, 1.0, 1.0};
    const GaugeFieldState st = random_state(LatticeSpec::spacetime(d, 5, 0.3), params, 30 + d);
    EXPECT_LT(max_abs(double_divergence(st)), 1e-12);
  }
}

TEST(Charge, TotalChargeIsRowSumTimesCellVolume) {
  const LatticeSpec spec = LatticeSpec::make(std::vector<int>{4, 8}, std::vector<double>{0.1, 0.25});
  CurrentField j(spec, 1);
  for (std::size_t s = 0; s < spec.sites(); ++s) j.set(s, 0, CMatrix(1, {cplx(spec.coords(s)[0] + 1.0)}));
  EXPECT_NEAR(total_charge(j, 1)(0, 0).real(), 2.0 * 8 * 0.25, 1e-15);
}

TEST(Decomposition, IdentityHoldsOffShell) {
  // the stencil only satisfies the product rule to second order
  for (int n : {1, 2}) {
    const ModelParams params{n, 0.5, 1.0};
    double r[2];
    for (int i : {0, 1}) {
      const GaugeFieldState st = smooth_state(test::box_spacetime(2, 32 << i), params, 40 + n);
      const Decomposition d = onshell_decomposition(st, params);
      EXPECT_GT(d.max_direct(), 0.01);
      if (n == 1) {
        EXPECT_EQ(max_abs(d.commutator), 0.0);
      }
      r[i] = d.identity_residual();
    }
    EXPECT_GE(test::order(r[0], r[1]), 1.8);
  }
}

TEST(Maxwell, ResidualOfZeroStateIsZero) {
  const ModelParams params{2, 1.0, 1.0};
  const GaugeFieldState st = new_state(LatticeSpec::spacetime(3, 4, 0.5), params);
  const CurrentField r = maxwell_residual(st, params);
  EXPECT_EQ(r.max_abs(), 0.0);
}
