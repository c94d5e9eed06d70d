#include "momentum_margin/quadratic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace momentum_margin {

Eigen::VectorXd gradient(const QuadraticInstance& quadratic, const Eigen::VectorXd& point) {
  require_consistent_dims(quadratic);
  if (point.size() != quadratic.dim()) {
    throw std::invalid_argument("gradient: point dimension does not match instance");
  }
  return quadratic.hessian * (point - quadratic.minimizer);
}

void require_consistent_dims(const QuadraticInstance& quadratic) {
  const auto n = quadratic.hessian.rows();
  if (n == 0 || quadratic.hessian.cols() != n) {
    throw std::invalid_argument("quadratic instance: hessian must be square and nonempty");
  }
  if (quadratic.minimizer.size() != n) {
    throw std::invalid_argument("quadratic instance: minimizer dimension mismatch");
  }
}

ValidationResult validate(const QuadraticInstance& quadratic) {
  ValidationResult result;
  auto fail = [&result](const std::string& what) {
    result.ok = false;
    result.violations.push_back(what);
  };

  if (!is_valid(quadratic.fc)) fail("function class must satisfy 0 < m <= L");
  const auto n = quadratic.hessian.rows();
  if (n == 0 || quadratic.hessian.cols() != n) {
    fail("hessian must be square and nonempty");
    return result;
  }
  if (quadratic.minimizer.size() != n) fail("minimizer dimension mismatch");

  const double scale = std::max(1.0, quadratic.hessian.cwiseAbs().maxCoeff());
  const double asym = (quadratic.hessian - quadratic.hessian.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    fail("hessian is not symmetric");
    return result;
  }

  if (result.ok) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(quadratic.hessian,
                                                          Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues().minCoeff();
    const double hi = solver.eigenvalues().maxCoeff();
    // Roundoff slack proportional to the spectral scale keeps instances built
    // from exact eigenvalues valid after an orthogonal conjugation.
    const double slack = 1e-10 * std::max(1.0, quadratic.fc.L);
    if (lo < quadratic.fc.m - slack || hi > quadratic.fc.L + slack) {
      std::ostringstream msg;
      msg << "spectrum [" << lo << ", " << hi << "] escapes [" << quadratic.fc.m << ", "
          << quadratic.fc.L << "]";
      fail(msg.str());
    }
  }
  return result;
}

}  // namespace momentum_margin
