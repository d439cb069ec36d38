#pragma once

#include <vector>

#include "dwym/complex_matrix.hpp"

namespace dwym {

/// exp(i s h) for Hermitian h, via the Hermitian eigendecomposition
/// h = V diag(lambda) V^dagger, so the result is unitary up to rounding.
/// Throws std::invalid_argument when h is not Hermitian within 1e-12.
CMatrix mat_exp_i(const CMatrix& h, double s);

/// d/dx exp(i h(x)) given h and dh = dh/dx (both Hermitian).
///
/// In the eigenbasis of h the derivative is the Hadamard product of
/// V^dagger (i dh) V with the divided differences
/// (e^{i l_j} - e^{i l_k}) / (i (l_j - l_k)), which reduce to e^{i l_j} on
/// (near-)degenerate pairs.
CMatrix mat_exp_i_derivative(const CMatrix& h, const CMatrix& dh);

cplx determinant(const CMatrix& m);

/// Hermitian basis of su(N): the generalised Gell-Mann matrices normalised
/// to tr(T_a T_b) = delta_ab / 2. With `with_identity` the U(N) generator
/// 1 / sqrt(2N) is appended.
std::vector<CMatrix> algebra_basis(int n, bool with_identity = false);

/// X with S X + X S = C for Hermitian positive definite S, solved in the
/// eigenbasis of S. Throws std::domain_error when S is (numerically) singular.
CMatrix solve_anticommutator(const CMatrix& s, const CMatrix& c);

}  // namespace dwym
