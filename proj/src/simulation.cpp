#include "momentum_margin/simulation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "momentum_margin/lifting.hpp"
#include "momentum_margin/spectral_analysis.hpp"

namespace momentum_margin {

QuadraticInstance make_quadratic(int n, const FunctionClass& fc, std::uint64_t seed,
                                 SpectrumPolicy policy) {
  require_valid(fc);
  if (n < 1) throw std::invalid_argument("make_quadratic: dimension must be at least 1");
  std::mt19937_64 rng(seed);

  Eigen::VectorXd eigenvalues(n);
  if (n == 1) {
    eigenvalues(0) = fc.L;
  } else {
    eigenvalues(0) = fc.m;
    eigenvalues(n - 1) = fc.L;
    switch (policy) {
      case SpectrumPolicy::Endpoints: {
        std::bernoulli_distribution coin(0.5);
        for (int i = 1; i + 1 < n; ++i) eigenvalues(i) = coin(rng) ? fc.L : fc.m;
        break;
      }
      case SpectrumPolicy::Uniform: {
        std::uniform_real_distribution<double> body(fc.m, fc.L);
        for (int i = 1; i + 1 < n; ++i) eigenvalues(i) = body(rng);
        break;
      }
    }
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd gaussian(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gaussian(i, j) = normal(rng);
  }
  const Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian).householderQ();

  QuadraticInstance instance;
  instance.hessian = q.transpose() * eigenvalues.asDiagonal() * q;
  instance.hessian = 0.5 * (instance.hessian + instance.hessian.transpose().eval());
  instance.minimizer.resize(n);
  for (int i = 0; i < n; ++i) instance.minimizer(i) = normal(rng);
  instance.offset = 0.0;
  instance.fc = fc;
  return instance;
}

Eigen::VectorXd method_step(const MethodSpec& spec, const QuadraticInstance& quadratic,
                            std::span<const Eigen::VectorXd> history) {
  require_valid(spec);
  require_consistent_dims(quadratic);
  const int k = spec.k;
  const int l = spec.l;
  if (static_cast<int>(history.size()) != k + 1) {
    throw std::invalid_argument("method_step: history must hold exactly k+1 iterates");
  }
  const int n = quadratic.dim();
  for (const auto& x : history) {
    if (x.size() != n) throw std::invalid_argument("method_step: iterate dimension mismatch");
  }

  // history[idx] is x_{t-k+idx}, so x_{t-j} sits at index k-j.
  Eigen::VectorXd next = history[k];
  for (int j = 0; j < k; ++j) {
    next += spec.beta[j] * (history[k - j] - history[k - j - 1]);
  }
  for (int j = 0; j <= l; ++j) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (int v = 0; v <= k - l; ++v) y += spec.gamma[v] * history[k - j - v];
    next -= spec.alpha[j] * gradient(quadratic, y);
  }
  return next;
}

SimulationTrace run(const MethodSpec& spec, const QuadraticInstance& quadratic,
                    const std::vector<Eigen::VectorXd>& x0_history, int steps) {
  require_valid(spec);
  require_consistent_dims(quadratic);
  if (steps < 1) throw std::invalid_argument("run: steps must be >= 1");
  if (static_cast<int>(x0_history.size()) != spec.k + 1) {
    throw std::invalid_argument("run: need exactly k+1 starting iterates");
  }
  for (const auto& x : x0_history) {
    if (x.size() != quadratic.dim()) {
      throw std::invalid_argument("run: iterate dimension mismatch");
    }
  }

  SimulationTrace trace;

  const LiftedSystem system = build_structure(spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hessian_eigs(quadratic.hessian,
                                                              Eigen::EigenvaluesOnly);
  trace.predicted_r = 0.0;
  for (Eigen::Index i = 0; i < hessian_eigs.eigenvalues().size(); ++i) {
    trace.predicted_r =
        std::max(trace.predicted_r, spectral_radius_at(system, hessian_eigs.eigenvalues()(i)));
  }

  // Iterate in offset coordinates e = x - x*. The recursion is the same
  // map (the gradient is linear in the offset), but the recorded distance
  // keeps decaying cleanly below eps * ||x*|| instead of saturating on
  // the cancellation noise of recomputing x - x* near convergence.
  QuadraticInstance centered;
  centered.hessian = quadratic.hessian;
  centered.minimizer = Eigen::VectorXd::Zero(quadratic.dim());
  centered.offset = 0.0;
  centered.fc = quadratic.fc;

  std::vector<Eigen::VectorXd> window;
  window.reserve(x0_history.size());
  for (const auto& x : x0_history) window.push_back(x - quadratic.minimizer);

  trace.distances.reserve(steps + 1);
  trace.truncated_at = steps;
  for (int t = 0; t <= steps; ++t) {
    const double distance = window.back().norm();
    trace.distances.push_back(distance);
    if (distance < kDistanceFloor || distance > kDistanceCeiling) {
      trace.truncated_at = t;
      break;
    }
    if (t == steps) break;
    Eigen::VectorXd next = method_step(spec, centered, window);
    window.erase(window.begin());
    window.push_back(std::move(next));
  }

  int positive = 0;
  for (double d : trace.distances) {
    if (d > 0.0 && std::isfinite(d)) ++positive;
  }
  if (positive == 0) {
    trace.empirical_r = 0.0;
  } else if (positive < 20) {
    trace.empirical_r = std::numeric_limits<double>::quiet_NaN();
  } else {
    trace.empirical_r = estimate_r_factor(trace.distances);
  }
  return trace;
}

double estimate_r_factor(std::span<const double> distances) {
  // Only samples with a finite log enter the fit; a trace truncated for
  // overflow carries its offending value (possibly inf), which must not
  // contaminate the slope.
  std::vector<std::pair<double, double>> samples;  // (t, log d_t)
  samples.reserve(distances.size());
  for (std::size_t t = 0; t < distances.size(); ++t) {
    if (distances[t] > 0.0 && std::isfinite(distances[t])) {
      samples.emplace_back(static_cast<double>(t), std::log(distances[t]));
    }
  }
  if (samples.size() < 20) {
    throw std::invalid_argument("estimate_r_factor: need at least 20 positive distances");
  }

  const std::size_t start = samples.size() / 2;
  const std::size_t count = samples.size() - start;
  double mean_t = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = start; i < samples.size(); ++i) {
    mean_t += samples[i].first;
    mean_y += samples[i].second;
  }
  mean_t /= static_cast<double>(count);
  mean_y /= static_cast<double>(count);

  double covariance = 0.0;
  double variance = 0.0;
  for (std::size_t i = start; i < samples.size(); ++i) {
    const double dt = samples[i].first - mean_t;
    covariance += dt * (samples[i].second - mean_y);
    variance += dt * dt;
  }
  return std::exp(covariance / variance);
}

}  // namespace momentum_margin
