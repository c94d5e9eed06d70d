#include "momentum_margin/spectral_analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "momentum_margin/gain_margin.hpp"

namespace momentum_margin {

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
  if (coeffs.size() < 2) {
    throw std::invalid_argument("polynomial_roots: need degree >= 1");
  }
  if (coeffs.front() == 0.0) {
    throw std::invalid_argument("polynomial_roots: zero leading coefficient");
  }
  const int n = static_cast<int>(coeffs.size()) - 1;
  const double lead = coeffs.front();

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) companion(i, i + 1) = 1.0;
  for (int p = 0; p < n; ++p) companion(n - 1, p) = -coeffs[coeffs.size() - 1 - p] / lead;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  const auto& values = solver.eigenvalues();
  std::vector<std::complex<double>> roots(values.data(), values.data() + values.size());
  return roots;
}

double spectral_radius_at(const LiftedSystem& system, double lambda) {
  const std::vector<std::complex<double>> roots =
      polynomial_roots(characteristic_polynomial(system, lambda));
  double radius = 0.0;
  for (const auto& root : roots) radius = std::max(radius, std::abs(root));
  return radius;
}

namespace {

struct Peak {
  double lambda = 0.0;
  double radius = 0.0;
};

// Golden-section ascent on [a, b]; the radius is continuous but can be
// non-smooth where root moduli cross, so only function values are used.
Peak refine_maximum(const LiftedSystem& system, double a, double b, double bracket_tolerance) {
  constexpr double kInvPhi = 0.6180339887498949;
  Peak best{a, spectral_radius_at(system, a)};
  const auto consider = [&best](double lambda, double radius) {
    if (radius > best.radius) best = {lambda, radius};
  };
  consider(b, spectral_radius_at(system, b));

  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double rc = spectral_radius_at(system, c);
  double rd = spectral_radius_at(system, d);
  consider(c, rc);
  consider(d, rd);

  while (b - a > bracket_tolerance) {
    if (rc > rd) {
      b = d;
      d = c;
      rd = rc;
      c = b - kInvPhi * (b - a);
      rc = spectral_radius_at(system, c);
      consider(c, rc);
    } else {
      a = c;
      c = d;
      rc = rd;
      d = a + kInvPhi * (b - a);
      rd = spectral_radius_at(system, d);
      consider(d, rd);
    }
  }
  return best;
}

}  // namespace

RateReport worst_case_rho(const MethodSpec& spec, const FunctionClass& fc,
                          const SweepOptions& opts) {
  require_valid(spec);
  require_valid(fc);
  const LiftedSystem system = build_structure(spec);

  RateReport report;
  report.rho_star = rho_star(fc);

  if (fc.m == fc.L) {
    const double radius = spectral_radius_at(system, fc.m);
    report.sweep.emplace_back(fc.m, radius);
    report.worst_rho = radius;
    report.argmax_lambda = fc.m;
  } else {
    if (opts.grid_points < 2) {
      throw std::invalid_argument("worst_case_rho: grid_points must be at least 2");
    }
    const int grid = opts.grid_points;
    const double step = (fc.L - fc.m) / (grid - 1);
    report.sweep.reserve(grid);
    for (int i = 0; i < grid; ++i) {
      const double lambda = i + 1 == grid ? fc.L : fc.m + i * step;
      report.sweep.emplace_back(lambda, spectral_radius_at(system, lambda));
    }

    const auto radius_at = [&report](int i) { return report.sweep[i].second; };
    Peak best{report.sweep.front().first, report.sweep.front().second};
    for (int i = 0; i < grid; ++i) {
      if (report.sweep[i].second > best.radius) {
        best = {report.sweep[i].first, report.sweep[i].second};
      }
    }

    // Refine every strict local grid maximum; a flat plateau produces no
    // strict maximum and is already covered by the grid scan above.
    const double bracket_tolerance = 1e-12 * (fc.L - fc.m);
    for (int i = 0; i < grid; ++i) {
      const bool rises = i == 0 || radius_at(i) > radius_at(i - 1);
      const bool falls = i + 1 == grid || radius_at(i) > radius_at(i + 1);
      if (!(rises && falls)) continue;
      const double lo = report.sweep[std::max(i - 1, 0)].first;
      const double hi = report.sweep[std::min(i + 1, grid - 1)].first;
      const Peak refined = refine_maximum(system, lo, hi, bracket_tolerance);
      if (refined.radius > best.radius) best = refined;
    }

    report.worst_rho = best.radius;
    report.argmax_lambda = best.lambda;
  }

  report.gap = report.worst_rho - report.rho_star;
  report.converging = report.worst_rho < 1.0;
  return report;
}

MethodSpec sample_method(std::uint64_t seed, std::uint64_t index, int max_k) {
  if (max_k < 1) throw std::invalid_argument("sample_method: max_k must be at least 1");
  std::seed_seq sequence{static_cast<std::uint32_t>(seed),
                         static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(index),
                         static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(sequence);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  MethodSpec spec;
  spec.k = std::uniform_int_distribution<int>(1, max_k)(rng);
  spec.l = std::uniform_int_distribution<int>(0, spec.k)(rng);

  spec.alpha.resize(spec.l + 1);
  do {
    for (double& a : spec.alpha) a = unit(rng);
  } while (std::abs(alpha_sum(spec)) < 1e-3);

  spec.beta.resize(spec.k);
  for (double& b : spec.beta) b = unit(rng);

  if (spec.l == spec.k) {
    spec.gamma = {1.0};
  } else {
    spec.gamma.resize(spec.k - spec.l + 1);
    for (double& g : spec.gamma) g = unit(rng);
    const double shift = (1.0 - gamma_sum(spec)) / static_cast<double>(spec.gamma.size());
    for (double& g : spec.gamma) g += shift;
  }
  return spec;
}

int max_worker_threads() {
  if (const char* env = std::getenv("MOMENTUM_MARGIN_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested >= 1) return requested;
    } catch (const std::exception&) {
      // Unparseable values fall through to the hardware default.
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

LowerBoundReport certify_lower_bound(int samples, const FunctionClass& fc, std::uint64_t seed,
                                     const SweepOptions& opts) {
  require_valid(fc);
  if (samples < 1) throw std::invalid_argument("certify_lower_bound: samples must be >= 1");

  struct SampleResult {
    double worst_rho = 0.0;
    bool converging = false;
  };
  std::vector<SampleResult> results(samples);

  // Results are keyed by sample index and every sample owns an RNG stream
  // derived from (seed, index), so the report is identical no matter how
  // the indices land on workers.
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&]() {
    for (int i = next.fetch_add(1); i < samples; i = next.fetch_add(1)) {
      try {
        const MethodSpec spec = sample_method(seed, static_cast<std::uint64_t>(i));
        const RateReport rate = worst_case_rho(spec, fc, opts);
        results[i] = {rate.worst_rho, rate.converging};
      } catch (...) {
        const std::scoped_lock lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const int workers = std::max(1, std::min(max_worker_threads(), samples));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  LowerBoundReport report;
  report.samples = samples;
  report.rho_star = rho_star(fc);
  report.min_worst_rho = std::numeric_limits<double>::quiet_NaN();
  for (const SampleResult& r : results) {
    if (!r.converging) continue;
    ++report.converging_count;
    if (std::isnan(report.min_worst_rho) || r.worst_rho < report.min_worst_rho) {
      report.min_worst_rho = r.worst_rho;
    }
  }
  report.margin = report.min_worst_rho - report.rho_star;  // NaN propagates
  return report;
}

}  // namespace momentum_margin
