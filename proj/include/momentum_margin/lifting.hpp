#pragma once

#include <Eigen/Dense>
#include <vector>

#include "momentum_margin/method_spec.hpp"
#include "momentum_margin/quadratic.hpp"

namespace momentum_margin {

/**
 * Linear-system representation of a method.
 *
 * Stacking the iterate history X_t = [x_{t-k}; ...; x_t] turns the method
 * into X_{t+1} = A X_t + B U_t with U_t the stacked gradient evaluations.
 * The scalar-structure factors of those block matrices are
 *
 *         [ 0      |      I_k        ]          [      0       ]
 *   a0 =  [--------+-----------------]    b0 =  [--------------]
 *         [ -b_{k-1}  b_{k-1}-b_{k-2} ... 1+b_0] [ a_l ... a_0  ]
 *
 * and one averaging row per gradient slot j = l..0,
 *
 *   c_row(j) = [ 0 x (l-j) | g_{k-l} ... g_0 | 0 x j ],
 *
 * where a = alpha, b = beta, g = gamma. n_coeffs holds the convolution
 * n = alpha * gamma, the only way the gradient weights enter the
 * closed-loop dynamics.
 */
struct LiftedSystem {
  int k = 0;
  int l = 0;
  Eigen::MatrixXd a0;                      // (k+1) x (k+1)
  Eigen::MatrixXd b0;                      // (k+1) x (l+1)
  std::vector<Eigen::RowVectorXd> c_rows;  // l+1 rows of length k+1, j = l..0
  std::vector<double> n_coeffs;            // n_0 .. n_k
};

/// A ratio of real polynomials, coefficients in descending powers of z.
struct RationalFunction {
  std::vector<double> numerator;
  std::vector<double> denominator;
};

struct TransferFunctions {
  RationalFunction plant;        // 1/(z-1)
  RationalFunction compensator;  // N(z)/D(z), proper by construction
};

/// n_j = sum_{v=0}^{j} alpha_v gamma_{j-v}, j = 0..k; out-of-range indices
/// contribute zero. Returns a vector of length k+1.
std::vector<double> convolve_numerator(const MethodSpec& spec);

/// Builds a0, b0, the averaging rows, and n_coeffs for a valid spec.
LiftedSystem build_structure(const MethodSpec& spec);

/// g(lambda) = a0 - lambda * N, where N is zero except for its last row
/// [n_k ... n_0]. Still in companion form: only the last row deviates from
/// the shift structure.
Eigen::MatrixXd companion_matrix(const LiftedSystem& system, double lambda);

/// Monic degree-(k+1) coefficient vector (descending powers) of
/// (z-1)(z^k - sum_j beta_j z^{k-j-1}) + lambda * sum_j n_j z^{k-j},
/// which is the characteristic polynomial of companion_matrix(system, lambda).
std::vector<double> characteristic_polynomial(const LiftedSystem& system, double lambda);

/// Full lifted iteration matrix kron(a0, I_n) - kron(b0, H) * C for the
/// instance's Hessian H. Its eigenvalue multiset is the union over the
/// eigenvalues lambda_i of H of the eigenvalues of g(lambda_i).
Eigen::MatrixXd build_lifted_matrix(const MethodSpec& spec, const QuadraticInstance& quadratic);

/// Plant 1/(z-1) and compensator N(z)/D(z) with
/// N(z) = sum_j n_j z^{k-j}, D(z) = z^k - sum_j beta_j z^{k-j-1}.
/// The zeros of 1 + lambda*P(z)*K(z) coincide with the roots of
/// characteristic_polynomial(system, lambda).
TransferFunctions transfer_functions(const LiftedSystem& system);

}  // namespace momentum_margin
