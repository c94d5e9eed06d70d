#pragma once

#include <Eigen/Dense>

#include "momentum_margin/method_spec.hpp"

namespace momentum_margin {

/// A concrete quadratic objective f(x) = 1/2 (x-x*)^T H (x-x*) + f0 drawn
/// from a class (m, L): H symmetric with eigenvalues in [m, L].
struct QuadraticInstance {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd minimizer;
  double offset = 0.0;
  FunctionClass fc;

  int dim() const { return static_cast<int>(hessian.rows()); }
};

/// grad f(y) = H (y - x*), evaluated exactly.
Eigen::VectorXd gradient(const QuadraticInstance& quadratic, const Eigen::VectorXd& y);

/// Checks symmetry (within 1e-12, scaled) and that the spectrum lies in
/// [m, L] up to eigensolver roundoff.
ValidationResult validate(const QuadraticInstance& quadratic);

void require_consistent_dims(const QuadraticInstance& quadratic);

}  // namespace momentum_margin
