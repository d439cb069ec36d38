#pragma once

#include <optional>
#include <vector>

#include "dwym/field.hpp"
#include "dwym/hamiltonian.hpp"
#include "dwym/smooth.hpp"
#include "dwym/state.hpp"

namespace dwym {

/// How derivatives of a gauge function are obtained. `best` picks the
/// closed form when the function carries one and the stencil otherwise.
enum class Derivative { lattice, analytic, best };

/// Real phase Lambda(x), optionally with its exact gradient.
class U1GaugeFunction {
 public:
  U1GaugeFunction() = default;
  explicit U1GaugeFunction(RealField values, std::optional<RealField> gradient = std::nullopt);

  static U1GaugeFunction from_smooth(const LatticeSpec& spec, const SmoothFunction& f);
  static U1GaugeFunction constant(const LatticeSpec& spec, double c);

  const LatticeSpec& spec() const noexcept { return lambda_.spec(); }
  const RealField& values() const noexcept { return lambda_; }
  bool has_analytic() const noexcept { return grad_.has_value(); }
  bool is_constant() const noexcept;

  /// D components, d_mu Lambda. Axes the stencil cannot reach give zero.
  RealField gradient(Derivative how) const;
  U1GaugeFunction scaled(double eps) const;

 private:
  RealField lambda_;
  std::optional<RealField> grad_;
};

/// Unitary field u(x), optionally with its exact derivatives and with the
/// Hermitian generator h(x) it was built from (u = exp(i h)).
class SUNGaugeFunction {
 public:
  SUNGaugeFunction() = default;

  /// u has N*N components; du, when given, D*N*N ordered [mu][row][col].
  static SUNGaugeFunction from_unitary(ComplexField u, std::optional<ComplexField> du = std::nullopt);
  /// u = exp(i h) site by site; du follows from dh when dh is supplied.
  static SUNGaugeFunction from_generator(ComplexField h, std::optional<ComplexField> dh = std::nullopt);
  /// h = sum_a theta^a T_a over the su(N) basis (u(N) with `with_identity`),
  /// with exact derivatives of the smooth coefficients.
  static SUNGaugeFunction from_coefficients(const LatticeSpec& spec, int n,
                                            const std::vector<SmoothFunction>& theta,
                                            bool with_identity = false);
  /// Random smooth coefficients, one per basis element.
  static SUNGaugeFunction random_smooth(const LatticeSpec& spec, int n, std::mt19937_64& rng,
                                        double amplitude, bool time_dependent,
                                        bool with_identity = false);
  static SUNGaugeFunction constant(const LatticeSpec& spec, const CMatrix& u);
  /// Constant generator h, u = exp(i h), derivatives zero.
  static SUNGaugeFunction constant_generator(const LatticeSpec& spec, const CMatrix& h);

  const LatticeSpec& spec() const noexcept { return u_.spec(); }
  int n() const noexcept { return n_; }
  CMatrix u(std::size_t s) const noexcept { return u_.matrix(s, 0, n_); }
  const ComplexField& u_field() const noexcept { return u_; }
  bool has_analytic() const noexcept { return du_.has_value(); }
  bool has_generator() const noexcept { return h_.has_value(); }
  bool is_constant() const noexcept;

  /// D*N*N components, d_mu u.
  ComplexField du(Derivative how) const;
  /// Requires a generator. N*N components.
  const ComplexField& generator() const;
  /// D*N*N components, d_mu h.
  ComplexField dgenerator(Derivative how) const;

  /// Same generator scaled by eps, u = exp(i eps h).
  SUNGaugeFunction scaled(double eps) const;
  /// u^dagger, with (du)^dagger as derivative.
  SUNGaugeFunction inverse() const;
  /// max over sites of |u^dagger u - 1|
  double unitarity_defect() const noexcept;

  /// u2 u1 with d(u2 u1) = du2 u1 + u2 du1 when both derivatives are known.
  friend SUNGaugeFunction product(const SUNGaugeFunction& u2, const SUNGaugeFunction& u1);

 private:
  int n_ = 1;
  ComplexField u_;
  std::optional<ComplexField> du_;
  std::optional<ComplexField> h_;
  std::optional<ComplexField> dh_;
};

/// phi -> phi e^{i Lambda}, pi -> pi e^{i Lambda}, a -> a + d Lambda / q,
/// p unchanged. Needs N = 1. q = 0 with a non-constant Lambda throws.
GaugeFieldState apply_u1(const GaugeFieldState& state, const U1GaugeFunction& gf,
                         const ModelParams& params, Derivative how = Derivative::lattice);

/// phi -> u phi, pi -> u pi, a -> u a u† + (1/iq) ah((d u) u†), p -> u p u†,
/// where ah(X) = (X - X†)/2. The projection is exact for the analytic
/// derivative and keeps a Hermitian under the stencil.
GaugeFieldState apply_sun(const GaugeFieldState& state, const SUNGaugeFunction& gf,
                          const ModelParams& params, Derivative how = Derivative::lattice);

/// Closed-form change of the density produced by the explicit x-dependence
/// of the transformation, expressed in the original fields:
///   U(1): i (conj(pi^a) phi - conj(phi) pi^a) d_a Lambda
///   SU(N), W_a = u† d_a u:
///     sum_a (pi^a† W_a phi - phi† W_a pi^a)
///     - sum_{a<b} tr(p^{ab} (W_a a_b + a_a W_b - W_b a_a - a_b W_a))
///     + (i/q) sum_{a<b} tr(p^{ab} [W_a, W_b])
DensityField delta_h_explicit(const GaugeFieldState& state, const U1GaugeFunction& gf,
                              const ModelParams& params, Derivative how = Derivative::best);
DensityField delta_h_explicit(const GaugeFieldState& state, const SUNGaugeFunction& gf,
                              const ModelParams& params, Derivative how = Derivative::best);

struct FormCheckOptions {
  Derivative transform = Derivative::lattice;  ///< used by apply_*
  Derivative correction = Derivative::best;    ///< used by delta_h_explicit
  bool flip_sign = false;                      ///< negates the correction; negative control
};

struct FormInvarianceReport {
  double defect = 0.0;  ///< max |H(T) - H(O) - dH_explicit|
  /// max |sum P^{ab} D_a D_b Lambda| (resp. the matrix analogue with u); the
  /// second-derivative terms that cancel against the antisymmetry of P.
  double skew_cancellation = 0.0;
  double max_delta_h = 0.0;
};

FormInvarianceReport check_form_invariance(const GaugeFieldState& state, const U1GaugeFunction& gf,
                                           const ModelParams& params, const FormCheckOptions& opt = {});
FormInvarianceReport check_form_invariance(const GaugeFieldState& state, const SUNGaugeFunction& gf,
                                           const ModelParams& params, const FormCheckOptions& opt = {});

/// First-order update with delta phi = i eps Lambda phi, delta pi = i eps Lambda pi,
/// delta a = (eps/q) d Lambda, delta p = 0.
GaugeFieldState apply_infinitesimal(const GaugeFieldState& state, const U1GaugeFunction& gf,
                                    double eps, const ModelParams& params,
                                    Derivative how = Derivative::best);
/// With Hermitian generator h: delta phi = i eps h phi, delta pi = i eps h pi,
/// delta a = i eps [h, a] + (eps/q) d h, delta p = i eps [h, p].
GaugeFieldState apply_infinitesimal(const GaugeFieldState& state, const SUNGaugeFunction& gf,
                                    double eps, const ModelParams& params,
                                    Derivative how = Derivative::best);

}  // namespace dwym
