#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "momentum_margin/lifting.hpp"
#include "momentum_margin/method_spec.hpp"

namespace momentum_margin {

/// All complex roots (with multiplicity) of a real-coefficient polynomial in
/// descending powers, computed as eigenvalues of its companion matrix.
/// Throws std::invalid_argument for degree 0 or a zero leading coefficient.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs);

/// Largest root modulus of characteristic_polynomial(system, lambda).
double spectral_radius_at(const LiftedSystem& system, double lambda);

struct SweepOptions {
  int grid_points = 2001;
  double tolerance = 1e-9;  ///< advertised absolute accuracy of worst_rho
};

/// Worst-case asymptotic rate of a method over a class (m, L).
struct RateReport {
  double worst_rho = 0.0;     ///< sup over lambda in [m, L] of the radius of g(lambda)
  double argmax_lambda = 0.0; ///< a maximizing lambda found by the sweep
  double rho_star = 0.0;
  double gap = 0.0;           ///< worst_rho - rho_star
  bool converging = false;    ///< worst_rho < 1
  std::vector<std::pair<double, double>> sweep;  ///< (lambda, radius) grid samples
};

/**
 * Evaluates the spectral radius of g(lambda) on a uniform grid over [m, L],
 * then refines around every strict local grid maximum (endpoints included)
 * by golden-section search until the bracket is below 1e-12*(L-m). The
 * radius can be non-smooth where roots collide, so no derivatives are used.
 * Non-convergent methods are reported with converging = false, not rejected.
 */
RateReport worst_case_rho(const MethodSpec& spec, const FunctionClass& fc,
                          const SweepOptions& opts = {});

/**
 * Draws one random method from the documented distribution, deterministically
 * from (seed, index) so samples can be evaluated in any order:
 *   k uniform on {1..max_k}, l uniform on {0..k},
 *   alpha_j, beta_j uniform on [-1, 1],
 *   gamma entries uniform on [-1, 1] then shifted to sum to one,
 *   alpha resampled while |sum(alpha)| < 1e-3.
 */
MethodSpec sample_method(std::uint64_t seed, std::uint64_t index, int max_k = 4);

struct LowerBoundReport {
  int samples = 0;
  int converging_count = 0;
  double min_worst_rho = 0.0;  ///< over converging samples; NaN when none converge
  double rho_star = 0.0;
  double margin = 0.0;         ///< min_worst_rho - rho_star; NaN when none converge
};

/// Monte-Carlo check of the rate lower bound: no sampled converging method
/// beats rho_star. Runs worst_case_rho on `samples` random methods
/// (parallelized; per-sample RNG streams keep the result order-independent)
/// and reports the minimum worst-case rate among converging ones.
LowerBoundReport certify_lower_bound(int samples, const FunctionClass& fc, std::uint64_t seed,
                                     const SweepOptions& opts = {});

/// Worker cap for parallel experiments: MOMENTUM_MARGIN_THREADS if set,
/// otherwise the hardware concurrency.
int max_worker_threads();

}  // namespace momentum_margin
