#pragma once

#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "dwym/field.hpp"
#include "dwym/state.hpp"

namespace dwym {

/// Raised when a run produces non-finite values.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DiagnosticsRecord;

struct EvolutionConfig {
  double dt = 0.125;
  int n_steps = 0;
  int cadence = 1;  ///< diagnostics every `cadence` steps, plus the last step
  /// Optional extra column: form-invariance defect of the recorded slice.
  std::function<double(const GaugeFieldState&)> form_check;
  /// Called with every five-slice window centred on a recorded step.
  std::function<void(const GaugeFieldState& window, int step)> on_window;

  /// Throws std::invalid_argument unless |dt| <= 0.5 * min spatial spacing,
  /// n_steps >= 0 and cadence >= 1.
  void validate(const LatticeSpec& spec) const;
};

/// pi^mu from the first amended canonical equation,
///   pi_mu = D_mu phi - i q a_mu phi, raised with the metric.
/// Axes the stencil cannot reach (time on a slice) contribute only the
/// potential term. D*N components.
ComplexField covariant_momenta(const ComplexField& phi, const ComplexField& a,
                               const ModelParams& params);

/// Contravariant p^{ab} (a < b, packed) from the potentials,
///   p_{ba} = D_b a_a - D_a a_b + i q (a_a a_b - a_b a_a).
ComplexField field_strength(const ComplexField& a, const ModelParams& params);

// Everything below works on 1+1 dimensional time slices in temporal gauge:
// positions (phi, a_1), momenta (pi^0, p^{01}), pi^1 rebuilt from the
// positions.

/// Recomputes pi^1 from phi and a_1.
void rebuild_constraints(GaugeFieldState& state, const ModelParams& params);

/// Sets p^{01} so that the Gauss constraint D_1 p^{10} = j^0 holds. The
/// centred stencil splits the lattice into even and odd sublattices, each of
/// which must carry zero net charge; otherwise throws std::invalid_argument
/// ("net charge on periodic lattice"). Each sublattice solution has zero
/// mean. With N > 1 and a_1 != 0 the source depends on p and is iterated to
/// a fixed point.
void solve_gauss(GaugeFieldState& state, const ModelParams& params);

/// Removes the total charge by a constant internal rotation of pi^0,
/// pi^0 -> pi^0 + i L phi with L Hermitian (a real number for N = 1).
void neutralize_charge(GaugeFieldState& state, const ModelParams& params);

/// One kick-drift-kick step. Negative dt runs backwards; the scheme is
/// time reversible up to rounding. Throws NumericalError on non-finite values.
void step(GaugeFieldState& state, double dt, const ModelParams& params);

/// The same step written with scalar arithmetic for N = 1.
void step_u1(GaugeFieldState& state, double dt, const ModelParams& params);

/// |pi^0|^2 + |pi^1|^2 + m^2 |phi|^2 + tr(p^{01} p^{01}) / 2 summed over the
/// slice; conserved by the semi-discrete equations of motion.
double canonical_energy(const GaugeFieldState& slice, const ModelParams& params);

/// Stacks consecutive slices into a space-time lattice whose time spacing is
/// `dt`, so that time derivatives of the trajectory can be taken.
GaugeFieldState stack_window(const std::vector<GaugeFieldState>& slices, double dt);

struct EvolutionResult {
  GaugeFieldState final_state;
  std::vector<DiagnosticsRecord> records;
};

/// Runs n_steps and records diagnostics at the cadence. Window quantities
/// need two slices either side of the recorded one, so two backward steps are
/// taken from the initial state and two extra forward steps after the last.
EvolutionResult evolve(const GaugeFieldState& initial, const EvolutionConfig& cfg,
                       const ModelParams& params);

struct ReductionReport {
  double max_deviation = 0.0;
  int steps = 0;
};

/// Evolves an N = 1 state through `step` and `step_u1` side by side and
/// reports the largest field difference seen.
ReductionReport reduce_to_u1(const GaugeFieldState& sun_state, const GaugeFieldState& u1_state,
                             const EvolutionConfig& cfg, const ModelParams& params);

struct DispersionResult {
  double k = 0.0;
  double omega_measured = 0.0;
  double omega_discrete = 0.0;   ///< (2/dt)^2 sin^2(w dt/2) = m^2 + sin^2(k dx)/dx^2
  double omega_continuum = 0.0;  ///< sqrt(k^2 + m^2)
};

/// Seeds a matter plane wave with integer spatial mode `mode` on the slice,
/// runs `steps` free steps and extracts the frequency from the three-term
/// recurrence of its Fourier amplitude c_n: cos(w dt) = Re sum conj(c_n)
/// (c_{n+1} + c_{n-1}) / (2 sum |c_n|^2).
DispersionResult measure_dispersion(const LatticeSpec& slice, const ModelParams& params, int mode,
                                    double amplitude, double dt, int steps);

/// Matter plane wave in component 0 that the free (q = 0) integrator carries
/// as a single travelling mode: pi^0 = i sin(theta) / dt phi with
/// cos(theta) = 1 - dt^2 W^2 / 2, W^2 = m^2 + sin^2(k dx) / dx^2. Seeding with
/// the continuum frequency instead also excites the backward mode.
GaugeFieldState discrete_plane_wave(const LatticeSpec& slice, const ModelParams& params, int mode,
                                    double amplitude, double dt);

struct InitialData {
  double amplitude = 0.1;
  /// Smooth random potential a_1 of this amplitude (abelian runs only; the
  /// non-abelian initialiser starts from a_1 = 0).
  bool random_potential = true;
};

/// Smooth random phi and pi^0, optional smooth a_1, then neutralize_charge,
/// solve_gauss and rebuild_constraints. Draws are independent of the lattice
/// resolution, so two slices sharing the box length get the same continuum
/// data.
GaugeFieldState coupled_initial_state(const LatticeSpec& slice, const ModelParams& params,
                                      std::mt19937_64& rng, const InitialData& init = {});

}  // namespace dwym
