#pragma once

#include "dwym/field.hpp"
#include "dwym/gauge.hpp"
#include "dwym/state.hpp"

namespace dwym {

/// D-vector of N x N matrices per site, [mu][row][col]. Scalar currents use
/// N = 1 and keep their imaginary parts so reality can be checked.
struct CurrentField {
  ComplexField j;
  int n = 1;

  CurrentField() = default;
  CurrentField(const LatticeSpec& spec, int order);

  const LatticeSpec& spec() const noexcept { return j.spec(); }
  CMatrix at(std::size_t s, int mu) const noexcept { return j.matrix(s, mu * n * n, n); }
  void set(std::size_t s, int mu, const CMatrix& m) noexcept { j.set_matrix(s, mu * n * n, m); }
  double max_abs() const noexcept;
  /// max |Im| over all entries; meaningful for scalar currents.
  double max_imag() const noexcept;
  /// max over sites and mu of |j - j^dagger|.
  double hermiticity_defect() const noexcept;
};

/// j^mu = iq (conj(pi^mu) phi - conj(phi) pi^mu) Lambda + p^{b mu} d_b Lambda.
CurrentField u1_current(const GaugeFieldState& state, const U1GaugeFunction& gf,
                        const ModelParams& params, Derivative how = Derivative::best);

/// j1^mu = iq (conj(pi^mu) phi - conj(phi) pi^mu) = 2 q Im(conj(phi) pi^mu).
CurrentField u1_matter_current(const GaugeFieldState& state, const ModelParams& params);

/// Scalar current of a Hermitian generator field h:
///   iq [pi^mu† h phi - phi† h pi^mu + sum_a tr(p^{a mu} [h, a_a])] + sum_a tr(p^{a mu} d_a h).
CurrentField sun_current(const GaugeFieldState& state, const SUNGaugeFunction& gf,
                         const ModelParams& params, Derivative how = Derivative::best);

/// Matrix current j^mu = iq (phi pi^mu† - pi^mu phi† + sum_a (a_a p^{a mu} - p^{a mu} a_a)).
/// Hermitian for Hermitian a and p.
CurrentField sun_gauge_current(const GaugeFieldState& state, const ModelParams& params);

/// sum_mu D_mu j^mu, entrywise. Every axis must be differentiable, so time
/// slices have to be stacked into a window first. N*N components.
ComplexField divergence(const CurrentField& j);

/// R^mu = sum_a D_a p^{a mu} - j^mu with j = sun_gauge_current.
/// Axes the stencil cannot reach contribute nothing to the divergence term.
CurrentField maxwell_residual(const GaugeFieldState& state, const ModelParams& params);

/// sum_{a,b} D_a D_b p^{ab}; zero up to rounding for any state.
ComplexField double_divergence(const GaugeFieldState& state);

/// Two evaluations of (1/iq) d_mu j^mu for the matrix current:
///   direct       the stencil divergence of sun_gauge_current divided by iq
///   paper_terms  the four matter bilinears built from the residuals of the
///                amended canonical equations plus the two field-strength
///                brackets contracted with p
///   commutator   -[a_a, R^a]
/// Analytically direct = paper_terms + commutator for any state; the
/// commutator term vanishes for N = 1 or when the field equation holds.
struct Decomposition {
  ComplexField direct;
  ComplexField paper_terms;
  ComplexField commutator;

  /// max |direct - paper_terms - commutator|
  double identity_residual() const noexcept;
  double max_direct() const noexcept;
  double max_paper_terms() const noexcept;
};

Decomposition onshell_decomposition(const GaugeFieldState& state, const ModelParams& params);

/// sum over the spatial sites of time row t of j^0, times the cell volume.
CMatrix total_charge(const CurrentField& j, int t = 0);

/// max |entry| over a complex field.
double max_abs(const ComplexField& f) noexcept;

}  // namespace dwym
