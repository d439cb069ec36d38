#pragma once

#include <array>
#include <random>

#include "dwym/complex_matrix.hpp"
#include "dwym/field.hpp"
#include "dwym/lattice.hpp"

namespace dwym {

struct ModelParams {
  int n = 1;  ///< internal dimension; 1 is the abelian case
  double q = 1.0;
  double m = 0.0;

  void validate() const;
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Canonical fields on a lattice.
///
///   phi  N components                     phi_I
///   pi   D*N, index mu*N + I              pi_I^mu   (contravariant)
///   a    D*N*N, [mu][row][col]            a_mu      (covariant, Hermitian)
///   p    pair_count(D)*N*N, alpha < beta  p^{alpha beta} (contravariant)
///
/// Only the alpha < beta triangle of p is stored, so p(b, a) == -p(a, b) holds
/// by construction.
class GaugeFieldState {
 public:
  GaugeFieldState() = default;
  GaugeFieldState(const LatticeSpec& spec, const ModelParams& params);

  const LatticeSpec& spec() const noexcept { return spec_; }
  const ModelParams& params() const noexcept { return params_; }
  int dim() const noexcept { return spec_.dim; }
  int n() const noexcept { return params_.n; }
  std::size_t sites() const noexcept { return spec_.sites(); }

  ComplexField& phi_field() noexcept { return phi_; }
  ComplexField& pi_field() noexcept { return pi_; }
  ComplexField& a_field() noexcept { return a_; }
  ComplexField& p_field() noexcept { return p_; }
  const ComplexField& phi_field() const noexcept { return phi_; }
  const ComplexField& pi_field() const noexcept { return pi_; }
  const ComplexField& a_field() const noexcept { return a_; }
  const ComplexField& p_field() const noexcept { return p_; }

  CVector phi(std::size_t s) const noexcept { return phi_.vector(s, 0, n()); }
  CVector pi(std::size_t s, int mu) const noexcept { return pi_.vector(s, mu * n(), n()); }
  CMatrix a(std::size_t s, int mu) const noexcept { return a_.matrix(s, mu * n() * n(), n()); }
  /// p^{alpha beta}; zero on the diagonal, negated below it.
  CMatrix p(std::size_t s, int alpha, int beta) const;

  void set_phi(std::size_t s, const CVector& v) noexcept { phi_.set_vector(s, 0, v); }
  void set_pi(std::size_t s, int mu, const CVector& v) noexcept { pi_.set_vector(s, mu * n(), v); }
  void set_a(std::size_t s, int mu, const CMatrix& m) noexcept {
    a_.set_matrix(s, mu * n() * n(), m);
  }
  /// Stores m as p^{alpha beta}, i.e. -m in the (beta, alpha) slot when
  /// alpha > beta. alpha == beta throws.
  void set_p(std::size_t s, int alpha, int beta, const CMatrix& m);

  /// max over sites and directions of |a_mu - a_mu^dagger|.
  double hermiticity_defect() const noexcept;
  /// Same for the stored p matrices.
  double p_hermiticity_defect() const noexcept;

  /// Exact comparison of every stored bit.
  bool bitwise_equal(const GaugeFieldState& o) const noexcept;
  /// max abs difference over all four fields.
  double max_deviation(const GaugeFieldState& o) const;

 private:
  LatticeSpec spec_{};
  ModelParams params_{};
  ComplexField phi_, pi_, a_, p_;
};

/// All-zero state. Validates spec and params.
GaugeFieldState new_state(const LatticeSpec& spec, const ModelParams& params);

enum class SeedTarget { matter, gauge };

struct PlaneWave {
  std::array<int, kMaxDim> mode{0, 0, 0, 0};  ///< integer spatial modes, entry 0 ignored
  double amplitude = 1.0;
  SeedTarget target = SeedTarget::matter;
  int component = 0;  ///< matter component I, or matrix row for gauge seeds
  int column = 0;     ///< gauge seeds only
  int direction = 1;  ///< gauge seeds only: which a_mu
};

/// Matter: phi_I = A exp(i(w t + k.x)) with w = sqrt(k^2 + m^2); momenta are
/// the covariant derivatives pi_mu = d_mu phi - i q a_mu phi evaluated
/// analytically, so pi^0 = i w phi when a = 0.
/// Gauge: adds the Hermitian part of A exp(i k.x) E_{row,col} to a_direction.
/// Throws if any |mode| exceeds half the extent on its axis.
void seed_plane_wave(GaugeFieldState& state, const PlaneWave& wave);

/// Independent uniform values in [-amplitude, amplitude] for every real
/// degree of freedom; a and p stay Hermitian.
void seed_uniform_random(GaugeFieldState& state, std::mt19937_64& rng, double amplitude);

/// Every real degree of freedom drawn as an independent smooth periodic
/// function. Off-shell, but with derivatives that converge under refinement.
/// With `time_dependent` false nothing varies along axis 0.
void seed_smooth_random(GaugeFieldState& state, std::mt19937_64& rng, double amplitude,
                        bool time_dependent = true);

/// Hermitian N x N matrix from N*N reals: diagonal first, then (re, im) of
/// the upper triangle row by row.
CMatrix hermitian_from_reals(int n, const double* r);

}  // namespace dwym
