#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "momentum_margin/method_spec.hpp"

namespace momentum_margin {

/// The optimal worst-case asymptotic rate for the class (m, L):
/// (sqrt(L) - sqrt(m)) / (sqrt(L) + sqrt(m)), in [0, 1).
double rho_star(const FunctionClass& fc);

/**
 * Values the closed-loop sensitivity must avoid when a single compensator
 * has to keep all poles of the loop gain family lambda/(z-1), lambda in
 * [m, L], inside a disk: the two real rays
 *
 *   (-inf, 2m/(m-L)]  and  [2L/(L-m), +inf).
 *
 * Empty (bounds at +-infinity) when m = L.
 */
struct ForbiddenSet {
  double left_bound = 0.0;
  double right_bound = 0.0;

  bool contains(double x) const { return x <= left_bound || x >= right_bound; }
};

ForbiddenSet forbidden_set(const FunctionClass& fc);

/// Conformal map taking the complement of the forbidden set onto the open
/// unit disk (principal square root):
///
///   theta(z) = (1 - sqrt(w)) / (1 + sqrt(w)),
///   w = (1 - (L-m)/(2L) z) / (1 + (L-m)/(2m) z).
///
/// theta(0) = 0 and theta(1) = rho_star. Throws std::domain_error for real
/// z inside the forbidden set.
std::complex<double> theta(std::complex<double> z, const FunctionClass& fc);

/// Pole-placement target: all closed-loop poles inside |z| < rho for every
/// loop gain in [m, L].
struct MarginProblem {
  FunctionClass fc;
  double rho = 0.0;  // in (0, 1)
};

struct FeasibilityReport {
  bool feasible = false;
  Eigen::Matrix2d pick_matrix;
  double determinant = 0.0;
  double rho = 0.0;
  double rho_star = 0.0;
};

/// Two-point interpolation feasibility test. The disk-radius target rho is
/// achievable by some proper compensator iff the Pick matrix
///
///   [ 1 - rho_star^2      1          ]
///   [ 1                   1/(1-rho^2)]
///
/// is positive definite, tested by exact leading principal minors. This
/// holds iff rho > rho_star.
FeasibilityReport pick_feasible(const MarginProblem& problem);

struct EquivalencePoint {
  double rho = 0.0;
  bool pick_feasible = false;
  bool exceeds_rho_star = false;
};

/// Evaluates both sides of the feasibility equivalence on a grid of rho
/// values; the booleans agree whenever |rho - rho_star| > 1e-12.
std::vector<EquivalencePoint> margin_equivalence_check(const FunctionClass& fc,
                                                       std::span<const double> rho_grid);

}  // namespace momentum_margin
