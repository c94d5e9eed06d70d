#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "momentum_margin/method_spec.hpp"
#include "momentum_margin/quadratic.hpp"

namespace momentum_margin {

enum class SpectrumPolicy {
  Endpoints,  ///< every eigenvalue is m or L, both present (n >= 2)
  Uniform,    ///< eigenvalues uniform on [m, L], one clamped to m and one to L
};

/// Seeded random instance from the class: H = Q^T diag(lambda) Q for a random
/// orthogonal Q, eigenvalues per the policy, minimizer standard normal,
/// offset zero. With n = 1 and m < L the single eigenvalue is L.
QuadraticInstance make_quadratic(int n, const FunctionClass& fc, std::uint64_t seed,
                                 SpectrumPolicy policy);

/// One step of the method; history is x_{t-k}..x_t, oldest first.
Eigen::VectorXd method_step(const MethodSpec& spec, const QuadraticInstance& quadratic,
                            std::span<const Eigen::VectorXd> history);

struct SimulationTrace {
  std::vector<double> distances;  ///< ||x_t - x*|| for t = 0..truncated_at
  double empirical_r = 0.0;
  double predicted_r = 0.0;       ///< worst companion radius over the instance's eigenvalues
  int truncated_at = 0;           ///< step where the trace hit the floor/ceiling, or the step count
};

inline constexpr double kDistanceFloor = 1e-300;
inline constexpr double kDistanceCeiling = 1e280;  // stop before log/overflow trouble

/// Iterates the method on the instance from the given k+1 starting iterates
/// (oldest first), recording iterate distances. Stops early when the distance
/// leaves [kDistanceFloor, kDistanceCeiling]. empirical_r is 0 by convention
/// when the trace is identically zero, otherwise estimate_r_factor applies.
SimulationTrace run(const MethodSpec& spec, const QuadraticInstance& quadratic,
                    const std::vector<Eigen::VectorXd>& x0_history, int steps);

/// Estimated asymptotic geometric rate of a distance sequence: least-squares
/// line through (t, log distances[t]) over the last half of the positive
/// samples, returned as exp(slope). Requires at least 20 positive entries.
double estimate_r_factor(std::span<const double> distances);

}  // namespace momentum_margin
