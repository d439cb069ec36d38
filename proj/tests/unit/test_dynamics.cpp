#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "../support/support.hpp"
#include "dwym/diagnostics.hpp"
#include "dwym/dynamics.hpp"
#include "dwym/noether.hpp"

using namespace dwym;

namespace {

GaugeFieldState coupled(const LatticeSpec& slice, const ModelParams& params, std::uint64_t seed,
                        bool random_potential = true) {
  std::mt19937_64 rng(seed);
  InitialData init;
  init.amplitude = 0.3;
  init.random_potential = random_potential;
  return coupled_initial_state(slice, params, rng, init);
}

/// max |D_1 p^{10} - j^0| on a slice.
double gauss_residual(const GaugeFieldState& slice, const ModelParams& params) {
  const CurrentField r = maxwell_residual(slice, params);
  double m = 0.0;
  for (std::size_t s = 0; s < slice.sites(); ++s) m = std::max(m, r.at(s, 0).max_abs());
  return m;
}

}  // namespace

TEST(Evolution, CflBoundIsEnforced) {
  const LatticeSpec slice = test::box_slice(32);
  EvolutionConfig cfg;
  cfg.dt = 0.6 * slice.spacing[1];
  try {
    cfg.validate(slice);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("CFL"), std::string::npos);
  }
  cfg.dt = -0.5 * slice.spacing[1];
  EXPECT_NO_THROW(cfg.validate(slice));
  cfg.cadence = 0;
  EXPECT_THROW(cfg.validate(slice), std::invalid_argument);
}

TEST(Evolution, StepIsTimeReversible) {
  for (int n : {1, 2}) {
    const ModelParams params{n, 0.8, 1.0};
    const LatticeSpec slice = test::box_slice(32);
    const GaugeFieldState start = coupled(slice, params, n, n == 1);
    GaugeFieldState st = start;
    const double dt = slice.spacing[0];
    for (int i = 0; i < 50; ++i) step(st, dt, params);
    EXPECT_GT(st.max_deviation(start), 1e-3);
    for (int i = 0; i < 50; ++i) step(st, -dt, params);
    EXPECT_LT(st.max_deviation(start), 1e-12);
  }
}

TEST(Evolution, ScalarStepMatchesMatrixStep) {
  const ModelParams params{1, 0.8, 1.0};
  const LatticeSpec slice = test::box_slice(32);
  GaugeFieldState a = coupled(slice, params, 3), b = a;
  for (int i = 0; i < 20; ++i) {
    step(a, slice.spacing[0], params);
    step_u1(b, slice.spacing[0], params);
  }
  EXPECT_LT(a.max_deviation(b), 1e-13);
  GaugeFieldState two = new_state(slice, {2, 0.8, 1.0});
  EXPECT_THROW(step_u1(two, 0.01, {2, 0.8, 1.0}), std::invalid_argument);
}

TEST(Evolution, CoupledInitialStateSatisfiesConstraints) {
  for (int n : {1, 2, 3}) {
    const ModelParams params{n, 0.8, 1.0};
    const GaugeFieldState st = coupled(test::box_slice(32), params, 10 + n, n == 1);
    EXPECT_LT(gauss_residual(st, params), 1e-12);
    EXPECT_LT(total_charge(sun_gauge_current(st, params)).max_abs(), 1e-12);
    EXPECT_LT(st.hermiticity_defect(), 1e-15);
  }
}

TEST(Evolution, GaussSolveRejectsNetCharge) {
  const ModelParams params{1, 1.0, 1.0};
  GaugeFieldState st = new_state(test::box_slice(16), params);
  for (std::size_t s = 0; s < st.sites(); ++s) {
    st.set_phi(s, CVector{1.0});
    st.set_pi(s, 0, CVector{cplx(0, 1)});
  }
  try {
    solve_gauss(st, params);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("net charge"), std::string::npos);
  }
  neutralize_charge(st, params);
  EXPECT_NO_THROW(solve_gauss(st, params));
}

TEST(Evolution, ChargeIsExactAndGaussConverges) {
  for (int n : {1, 2}) {
    const ModelParams params{n, 0.8, 1.0};
    double gauss[2], energy[2];
    for (int i : {0, 1}) {
      const LatticeSpec slice = test::box_slice(32 << i);
      GaugeFieldState st = coupled(slice, params, 20 + n, n == 1);
      const double e0 = canonical_energy(st, params);
      for (int k = 0; k < (100 << i); ++k) step(st, slice.spacing[0], params);
      EXPECT_LT(total_charge(sun_gauge_current(st, params)).max_abs(), 1e-12);
      gauss[i] = gauss_residual(st, params);
      energy[i] = std::abs(canonical_energy(st, params) - e0) / e0;
    }
    EXPECT_GE(test::order(gauss[0], gauss[1]), 1.8);
    EXPECT_LT(energy[1], energy[0]);
  }
}

TEST(Evolution, RejectsNonTemporalGaugeAndNonFiniteValues) {
  const ModelParams params{1, 1.0, 1.0};
  GaugeFieldState st = new_state(test::box_slice(16), params);
  st.set_a(3, 0, CMatrix(1, {0.5}));
  EXPECT_THROW(step(st, 0.01, params), std::invalid_argument);
  GaugeFieldState bad = new_state(test::box_slice(16), params);
  bad.set_phi(2, CVector{std::numeric_limits<double>::quiet_NaN()});
  EXPECT_THROW(step(bad, 0.01, params), NumericalError);
}

TEST(Evolution, RecordsAtCadenceAndLastStep) {
  const ModelParams params{1, 0.8, 1.0};
  const LatticeSpec slice = test::box_slice(16);
  EvolutionConfig cfg;
  cfg.dt = slice.spacing[0];
  cfg.n_steps = 10;
  cfg.cadence = 4;
  int windows = 0;
  cfg.on_window = [&](const GaugeFieldState& w, int) {
    EXPECT_EQ(w.spec().extent[0], 5);
    ++windows;
  };
  const EvolutionResult r = evolve(coupled(slice, params, 30), cfg, params);
  ASSERT_EQ(r.records.size(), 4u);
  EXPECT_EQ(r.records[0].step, 0);
  EXPECT_EQ(r.records[1].step, 4);
  EXPECT_EQ(r.records[2].step, 8);
  EXPECT_EQ(r.records[3].step, 10);
  EXPECT_DOUBLE_EQ(r.records[3].time, 10 * cfg.dt);
  EXPECT_EQ(r.records[0].charge_drift, 0.0);
  EXPECT_EQ(windows, 4);
}

TEST(Evolution, StackWindowSetsTimeSpacing) {
  const ModelParams params{1, 0.8, 1.0};
  const LatticeSpec slice = test::box_slice(8);
  std::vector<GaugeFieldState> slices;
  for (int t = 0; t < 5; ++t) {
    GaugeFieldState st = new_state(slice, params);
    for (std::size_t s = 0; s < st.sites(); ++s) st.set_phi(s, CVector{cplx(t, s)});
    slices.push_back(st);
  }
  const GaugeFieldState w = stack_window(slices, slice.spacing[0]);
  EXPECT_EQ(w.spec().extent[0], 5);
  EXPECT_DOUBLE_EQ(w.spec().spacing[0], slice.spacing[0]);
  EXPECT_TRUE(slice_of(w, 3).bitwise_equal(slices[3]));
  slices[2] = new_state(test::box_slice(16), params);
  EXPECT_THROW(stack_window(slices, 0.03), std::invalid_argument);
}

TEST(Evolution, ReductionToScalarIsExact) {
  const ModelParams params{1, 0.8, 1.0};
  const LatticeSpec slice = test::box_slice(32);
  const GaugeFieldState st = coupled(slice, params, 40);
  EvolutionConfig cfg;
  cfg.dt = slice.spacing[0];
  cfg.n_steps = 50;
  const ReductionReport r = reduce_to_u1(st, st, cfg, params);
  EXPECT_EQ(r.steps, 50);
  EXPECT_LT(r.max_deviation, 1e-13);
}

TEST(Dispersion, FreeWaveFollowsDiscreteRelation) {
  const ModelParams params{1, 0.0, 1.0};
  const LatticeSpec slice = test::box_slice(32);
  for (int mode : {1, 4, 8}) {
    const DispersionResult r = measure_dispersion(slice, params, mode, 0.1, slice.spacing[0], 200);
    EXPECT_NEAR(r.omega_measured, r.omega_discrete, 1e-9);
    EXPECT_DOUBLE_EQ(r.k, mode);
    EXPECT_NEAR(r.omega_continuum, std::sqrt(mode * mode + 1.0), 1e-14);
  }
  EXPECT_THROW(measure_dispersion(slice, {1, 0.5, 1.0}, 1, 0.1, 0.01, 100), std::invalid_argument);
}

TEST(Dispersion, DiscretePlaneWaveKeepsEnergyConstant) {
  const ModelParams params{1, 0.0, 1.0};
  const LatticeSpec slice = test::box_slice(32);
  const GaugeFieldState st = discrete_plane_wave(slice, params, 3, 0.2, slice.spacing[0]);
  EvolutionConfig cfg;
  cfg.dt = slice.spacing[0];
  cfg.n_steps = 300;
  cfg.cadence = 10;
  const EvolutionResult r = evolve(st, cfg, params);
  const double e0 = r.records.front().energy;
  EXPECT_GT(e0, 0.1);
  for (const DiagnosticsRecord& rec : r.records) EXPECT_NEAR(rec.energy, e0, 1e-12 * e0);
  EXPECT_THROW(discrete_plane_wave(slice, params, 3, 0.2, 10.0), std::invalid_argument);
}
