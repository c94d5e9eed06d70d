#include "momentum_margin/lifting.hpp"

#include <stdexcept>

#include "momentum_margin/polynomial.hpp"

namespace momentum_margin {

std::vector<double> convolve_numerator(const MethodSpec& spec) {
  require_valid(spec);
  std::vector<double> n(spec.k + 1, 0.0);
  for (int v = 0; v <= spec.l; ++v) {
    for (int w = 0; w <= spec.k - spec.l; ++w) {
      n[v + w] += spec.alpha[v] * spec.gamma[w];
    }
  }
  return n;
}

LiftedSystem build_structure(const MethodSpec& spec) {
  require_valid(spec);
  const int k = spec.k;
  const int l = spec.l;

  LiftedSystem system;
  system.k = k;
  system.l = l;

  system.a0 = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (int i = 0; i < k; ++i) system.a0(i, i + 1) = 1.0;
  system.a0(k, 0) = -spec.beta[k - 1];
  for (int c = 1; c < k; ++c) system.a0(k, c) = spec.beta[k - c] - spec.beta[k - c - 1];
  system.a0(k, k) = 1.0 + spec.beta[0];

  system.b0 = Eigen::MatrixXd::Zero(k + 1, l + 1);
  for (int c = 0; c <= l; ++c) system.b0(k, c) = spec.alpha[l - c];

  system.c_rows.reserve(l + 1);
  for (int j = l; j >= 0; --j) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(k + 1);
    for (int idx = 0; idx <= k - l; ++idx) {
      row(l - j + idx) = spec.gamma[k - l - idx];
    }
    system.c_rows.push_back(std::move(row));
  }

  system.n_coeffs = convolve_numerator(spec);
  return system;
}

Eigen::MatrixXd companion_matrix(const LiftedSystem& system, double lambda) {
  const int k = system.k;
  Eigen::MatrixXd g = system.a0;
  for (int p = 0; p <= k; ++p) g(k, p) -= lambda * system.n_coeffs[k - p];
  return g;
}

std::vector<double> characteristic_polynomial(const LiftedSystem& system, double lambda) {
  // The matrix keeps companion form for every lambda, so the coefficients
  // can be read off its last row: char(z) = z^{k+1} - sum_p row[p] z^p.
  const int k = system.k;
  const Eigen::MatrixXd g = companion_matrix(system, lambda);
  std::vector<double> cp(k + 2);
  cp[0] = 1.0;
  for (int p = 0; p <= k; ++p) cp[k + 1 - p] = -g(k, p);
  return cp;
}

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// D(z) = z^k - sum_j beta_j z^{k-j-1}, telescoped back out of the last row
// of a0 (its entries are consecutive beta differences).
std::vector<double> compensator_denominator(const LiftedSystem& system) {
  const int k = system.k;
  std::vector<double> d(k + 1, 0.0);
  d[0] = 1.0;
  double beta = system.a0(k, k) - 1.0;  // beta_0
  d[1] = -beta;
  for (int c = k - 1; c >= 1; --c) {
    beta += system.a0(k, c);  // beta_{k-c} = a0(k, c) + beta_{k-c-1}
    d[k - c + 1] = -beta;
  }
  return d;
}

}  // namespace

Eigen::MatrixXd build_lifted_matrix(const MethodSpec& spec, const QuadraticInstance& quadratic) {
  require_consistent_dims(quadratic);
  const LiftedSystem system = build_structure(spec);
  const int n = quadratic.dim();
  const int k = system.k;
  const int l = system.l;

  Eigen::MatrixXd c = Eigen::MatrixXd::Zero((l + 1) * n, (k + 1) * n);
  for (int i = 0; i <= l; ++i) {
    for (int p = 0; p <= k; ++p) {
      c.block(i * n, p * n, n, n) =
          system.c_rows[i](p) * Eigen::MatrixXd::Identity(n, n);
    }
  }

  return kron(system.a0, Eigen::MatrixXd::Identity(n, n)) -
         kron(system.b0, quadratic.hessian) * c;
}

TransferFunctions transfer_functions(const LiftedSystem& system) {
  TransferFunctions tf;
  tf.plant.numerator = {1.0};
  tf.plant.denominator = {1.0, -1.0};
  // n_coeffs ascending in j is descending in powers: N(z) = sum_j n_j z^{k-j}.
  tf.compensator.numerator = system.n_coeffs;
  tf.compensator.denominator = compensator_denominator(system);
  return tf;
}

}  // namespace momentum_margin
