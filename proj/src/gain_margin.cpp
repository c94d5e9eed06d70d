#include "momentum_margin/gain_margin.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace momentum_margin {

double rho_star(const FunctionClass& fc) {
  require_valid(fc);
  const double rl = std::sqrt(fc.L);
  const double rm = std::sqrt(fc.m);
  return (rl - rm) / (rl + rm);
}

ForbiddenSet forbidden_set(const FunctionClass& fc) {
  require_valid(fc);
  if (fc.m == fc.L) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
  }
  return {2.0 * fc.m / (fc.m - fc.L), 2.0 * fc.L / (fc.L - fc.m)};
}

std::complex<double> theta(std::complex<double> z, const FunctionClass& fc) {
  require_valid(fc);
  if (z.imag() == 0.0 && forbidden_set(fc).contains(z.real())) {
    throw std::domain_error("theta: real argument lies in the forbidden set");
  }
  const std::complex<double> w =
      (1.0 - (fc.L - fc.m) / (2.0 * fc.L) * z) / (1.0 + (fc.L - fc.m) / (2.0 * fc.m) * z);
  const std::complex<double> s = std::sqrt(w);  // principal branch
  return (1.0 - s) / (1.0 + s);
}

FeasibilityReport pick_feasible(const MarginProblem& problem) {
  require_valid(problem.fc);
  if (!(problem.rho > 0.0) || !(problem.rho < 1.0)) {
    throw std::invalid_argument("pick_feasible: rho must lie in (0, 1)");
  }

  FeasibilityReport report;
  report.rho = problem.rho;
  report.rho_star = rho_star(problem.fc);

  const double p00 = 1.0 - report.rho_star * report.rho_star;
  const double p11 = 1.0 / (1.0 - problem.rho * problem.rho);
  report.pick_matrix << p00, 1.0, 1.0, p11;

  // det(P) in factored form: the quotient is exactly 1 when rho equals
  // rho_star bit for bit, so the boundary verdict cannot flip on roundoff.
  report.determinant =
      p00 / (1.0 - problem.rho * problem.rho) - 1.0;
  report.feasible = p00 > 0.0 && report.determinant > 0.0;
  return report;
}

std::vector<EquivalencePoint> margin_equivalence_check(const FunctionClass& fc,
                                                       std::span<const double> rho_grid) {
  require_valid(fc);
  const double rs = rho_star(fc);
  std::vector<EquivalencePoint> points;
  points.reserve(rho_grid.size());
  for (double rho : rho_grid) {
    EquivalencePoint point;
    point.rho = rho;
    point.pick_feasible = pick_feasible({fc, rho}).feasible;
    point.exceeds_rho_star = rho > rs;
    points.push_back(point);
  }
  return points;
}

}  // namespace momentum_margin
