#pragma once

#include "dwym/field.hpp"
#include "dwym/state.hpp"

namespace dwym {

enum class HamiltonianKind { free, kgm, ym };

/// Real density per site plus the imaginary part the complex evaluation left
/// behind, kept so that callers can check it is rounding noise.
struct DensityField {
  RealField value;
  RealField imag;

  double max_abs() const noexcept;
  /// max |imag| / max(1, max |value|)
  double imag_residue() const noexcept;
};

/// sum_J g_aa |pi_J^a|^2 + m^2 |phi_J|^2
DensityField eval_free(const GaugeFieldState& state, const ModelParams& params);

/// Scalar electrodynamics; throws std::invalid_argument for N > 1.
DensityField eval_kgm(const GaugeFieldState& state, const ModelParams& params);

/// Yang-Mills coupled density
///   pi^a† pi_a + m^2 phi†phi - 1/4 tr(p^{ab} p_{ab})
///   + iq (pi^a† a_a phi - phi† a_a pi^a - tr(p^{ab} a_a a_b)).
DensityField eval_ym(const GaugeFieldState& state, const ModelParams& params);

DensityField evaluate(HamiltonianKind kind, const GaugeFieldState& state, const ModelParams& params);

/// Only the iq(...) bracket of the Yang-Mills density. Everything else in the
/// density is invariant under unitary conjugation.
DensityField coupling_density(const GaugeFieldState& state, const ModelParams& params);

/// Wirtinger partials of the density. The barred fields are stored; the
/// unbarred partials are their complex conjugates because the density is real.
struct MatterGradient {
  ComplexField d_phibar;  ///< dH/d(conj phi_I), N components
  ComplexField d_pibar;   ///< dH/d(conj pi_I^mu), D*N components, mu-major

  ComplexField d_phi() const;
  ComplexField d_pi() const;
};

MatterGradient grad_matter(const GaugeFieldState& state, const ModelParams& params,
                           HamiltonianKind kind = HamiltonianKind::ym);

/// Velocity reconstruction minus the Hamiltonian,
///   sum_a [pi^a† d_a phi + (d_a phi)† pi^a] + sum_{a<b} tr(p^{ab}(d_b a_a - d_a a_b)) - H,
/// with d the centred stencil on every axis. Off-shell input is evaluated as
/// is; the result only equals the Lagrangian when the first canonical
/// equation holds. Needs a space-time lattice, not a slice.
DensityField legendre_lagrangian(const GaugeFieldState& state, const ModelParams& params,
                                 HamiltonianKind kind = HamiltonianKind::ym);

/// Sum of component `c` over the spatial sites of time row `t`, times the
/// spatial cell volume. Summation is serial so results are reproducible.
double slice_integral(const RealField& f, int t = 0, int c = 0);

}  // namespace dwym
