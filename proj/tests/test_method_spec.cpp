#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "momentum_margin/method_spec.hpp"
#include "momentum_margin/quadratic.hpp"
#include "momentum_margin/simulation.hpp"

namespace mm = momentum_margin;

TEST_CASE("function class validity") {
  CHECK(mm::is_valid({1.0, 9.0}));
  CHECK(mm::is_valid({4.0, 4.0}));
  CHECK_FALSE(mm::is_valid({0.0, 1.0}));
  CHECK_FALSE(mm::is_valid({-1.0, 2.0}));
  CHECK_FALSE(mm::is_valid({2.0, 1.0}));
  CHECK_FALSE(mm::is_valid({1.0, std::numeric_limits<double>::infinity()}));
  CHECK_THROWS_AS(mm::require_valid(mm::FunctionClass{0.0, 1.0}), std::invalid_argument);
  CHECK_NOTHROW(mm::require_valid(mm::FunctionClass{1.0, 9.0}));
}

TEST_CASE("gradient descent preset uses step 2/(m+L)") {
  const mm::MethodSpec spec = mm::preset(mm::Preset::GradientDescent, {1.0, 9.0});
  CHECK(spec.k == 1);
  CHECK(spec.l == 0);
  REQUIRE(spec.alpha.size() == 1);
  CHECK(spec.alpha[0] == doctest::Approx(0.2).epsilon(1e-15));
  REQUIRE(spec.beta.size() == 1);
  CHECK(spec.beta[0] == 0.0);
  REQUIRE(spec.gamma.size() == 2);
  CHECK(spec.gamma[0] == 1.0);
  CHECK(spec.gamma[1] == 0.0);
  CHECK(mm::validate(spec).ok);
}

TEST_CASE("heavy ball preset on (1, 9)") {
  const mm::MethodSpec spec = mm::preset(mm::Preset::HeavyBall, {1.0, 9.0});
  // 4/(sqrt(9)+sqrt(1))^2 = 0.25 and ((sqrt(9)-1)/(sqrt(9)+1))^2 = 0.25,
  // both exact in binary.
  CHECK(spec.alpha[0] == 0.25);
  CHECK(spec.beta[0] == 0.25);
  CHECK(spec.gamma[0] == 1.0);
  CHECK(spec.gamma[1] == 0.0);
  CHECK(mm::validate(spec).ok);
}

TEST_CASE("nesterov preset on (1, 9)") {
  const mm::MethodSpec spec = mm::preset(mm::Preset::Nesterov, {1.0, 9.0});
  CHECK(spec.alpha[0] == 1.0 / 9.0);
  CHECK(spec.beta[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(spec.gamma[0] == 1.0 + spec.beta[0]);
  CHECK(spec.gamma[1] == -spec.beta[0]);
  CHECK(mm::gamma_sum(spec) == 1.0);
  CHECK(mm::validate(spec).ok);
}

TEST_CASE("triple momentum preset on (1, 9)") {
  const mm::MethodSpec spec = mm::preset(mm::Preset::TripleMomentum, {1.0, 9.0});
  const double rho = 1.0 - std::sqrt(1.0 / 9.0);
  CHECK(spec.alpha[0] == doctest::Approx((1.0 + rho) / 9.0).epsilon(1e-12));
  CHECK(spec.beta[0] == doctest::Approx(rho * rho / (2.0 - rho)).epsilon(1e-12));
  CHECK(spec.gamma[0] ==
        doctest::Approx(1.0 + rho * rho / ((1.0 + rho) * (2.0 - rho))).epsilon(1e-12));
  CHECK(mm::gamma_sum(spec) == 1.0);
  CHECK(mm::validate(spec).ok);
}

TEST_CASE("every preset validates and sums gamma to exactly one") {
  const mm::FunctionClass classes[] = {{1.0, 9.0}, {1.0, 100.0}, {2.0, 50.0}, {3.0, 3.0}};
  for (const auto& fc : classes) {
    for (mm::Preset which : mm::kAllPresets) {
      const mm::MethodSpec spec = mm::preset(which, fc);
      CAPTURE(mm::preset_name(which));
      CAPTURE(fc.m);
      CAPTURE(fc.L);
      CHECK(mm::validate(spec).ok);
      CHECK(mm::gamma_sum(spec) == 1.0);
      CHECK(mm::alpha_sum(spec) > 0.0);
    }
  }
}

TEST_CASE("preset names round-trip") {
  for (mm::Preset which : mm::kAllPresets) {
    const auto back = mm::preset_from_name(mm::preset_name(which));
    REQUIRE(back.has_value());
    CHECK(*back == which);
  }
  CHECK_FALSE(mm::preset_from_name("polyak").has_value());
  CHECK_THROWS_AS(mm::preset("polyak", {1.0, 9.0}), std::invalid_argument);
}

TEST_CASE("validation reports every violated rule") {
  mm::MethodSpec spec;
  spec.k = 1;
  spec.l = 0;
  spec.alpha = {0.25};
  spec.beta = {0.25};
  spec.gamma = {1.0, 0.0};
  CHECK(mm::validate(spec).ok);

  SUBCASE("zero alpha sum is named") {
    spec.alpha = {0.0};
    const auto result = mm::validate(spec);
    CHECK_FALSE(result.ok);
    REQUIRE(result.violations.size() == 1);
    CHECK(result.violations[0] == "sum of alpha is zero");
  }
  SUBCASE("alpha sum within 1e-12 of zero counts as zero") {
    spec.alpha = {5e-13};
    CHECK_FALSE(mm::validate(spec).ok);
    spec.alpha = {2e-12};
    CHECK(mm::validate(spec).ok);
  }
  SUBCASE("gamma sum rule is named and uses the documented tolerance") {
    spec.gamma = {1.0, 1e-6};
    const auto result = mm::validate(spec);
    CHECK_FALSE(result.ok);
    REQUIRE(result.violations.size() == 1);
    CHECK(result.violations[0] == "gamma does not sum to 1");
    spec.gamma = {1.0, 0.5 * mm::kGammaSumTolerance};
    CHECK(mm::validate(spec).ok);
  }
  SUBCASE("k must be positive") {
    spec.k = 0;
    CHECK_FALSE(mm::validate(spec).ok);
  }
  SUBCASE("l bounded by k") {
    spec.l = 2;
    CHECK_FALSE(mm::validate(spec).ok);
  }
  SUBCASE("coefficient lengths are checked") {
    spec.alpha = {0.1, 0.2};
    CHECK_FALSE(mm::validate(spec).ok);
    spec.alpha = {0.25};
    spec.beta = {};
    CHECK_FALSE(mm::validate(spec).ok);
    spec.beta = {0.25};
    spec.gamma = {1.0};
    CHECK_FALSE(mm::validate(spec).ok);
  }
  SUBCASE("non-finite coefficients are rejected") {
    spec.beta = {std::numeric_limits<double>::quiet_NaN()};
    CHECK_FALSE(mm::validate(spec).ok);
  }
  SUBCASE("require_valid aggregates violations into the exception text") {
    spec.alpha = {0.0};
    spec.gamma = {1.0, 0.5};
    try {
      mm::require_valid(spec);
      FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
      const std::string what = e.what();
      CHECK(what.find("sum of alpha is zero") != std::string::npos);
      CHECK(what.find("gamma does not sum to 1") != std::string::npos);
    }
  }
}

TEST_CASE("minimizer is a fixed point of every preset") {
  mm::QuadraticInstance quadratic;
  quadratic.hessian = Eigen::Vector2d(1.0, 9.0).asDiagonal();
  quadratic.minimizer = Eigen::Vector2d(3.0, -2.0);
  quadratic.fc = {1.0, 9.0};
  for (mm::Preset which : mm::kAllPresets) {
    const mm::MethodSpec spec = mm::preset(which, quadratic.fc);
    const double residual = mm::fixed_point_residual(spec, quadratic);
    CAPTURE(mm::preset_name(which));
    CHECK(residual <= 1e-10 * (1.0 + quadratic.minimizer.norm()));
  }
}

TEST_CASE("fixed point residual stays tiny for random valid methods") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    mm::MethodSpec spec;
    spec.k = std::uniform_int_distribution<int>(1, 4)(rng);
    spec.l = std::uniform_int_distribution<int>(0, spec.k)(rng);
    spec.alpha.resize(spec.l + 1);
    do {
      for (double& a : spec.alpha) a = unit(rng);
    } while (std::abs(mm::alpha_sum(spec)) < 1e-3);
    spec.beta.resize(spec.k);
    for (double& b : spec.beta) b = unit(rng);
    spec.gamma.resize(spec.k - spec.l + 1);
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < spec.gamma.size(); ++i) {
      spec.gamma[i] = unit(rng);
      partial += spec.gamma[i];
    }
    spec.gamma.back() = 1.0 - partial;
    REQUIRE(mm::validate(spec).ok);

    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const mm::QuadraticInstance quadratic =
        mm::make_quadratic(n, {0.5, 8.0}, 1000 + trial, mm::SpectrumPolicy::Uniform);
    const double residual = mm::fixed_point_residual(spec, quadratic);
    CHECK(residual <= 1e-10 * (1.0 + quadratic.minimizer.norm()));
  }
}

TEST_CASE("quadratic instance validation") {
  mm::QuadraticInstance quadratic;
  quadratic.hessian = Eigen::Vector2d(1.0, 9.0).asDiagonal();
  quadratic.minimizer = Eigen::Vector2d::Zero();
  quadratic.fc = {1.0, 9.0};
  CHECK(mm::validate(quadratic).ok);

  SUBCASE("asymmetry is rejected") {
    quadratic.hessian(0, 1) = 0.5;
    CHECK_FALSE(mm::validate(quadratic).ok);
  }
  SUBCASE("spectrum outside the class is rejected") {
    quadratic.hessian(1, 1) = 9.5;
    CHECK_FALSE(mm::validate(quadratic).ok);
    quadratic.hessian(1, 1) = 9.0;
    quadratic.hessian(0, 0) = 0.5;
    CHECK_FALSE(mm::validate(quadratic).ok);
  }
  SUBCASE("dimension mismatch is rejected") {
    quadratic.minimizer = Eigen::Vector3d::Zero();
    CHECK_FALSE(mm::validate(quadratic).ok);
    CHECK_THROWS_AS(mm::require_consistent_dims(quadratic), std::invalid_argument);
  }
  SUBCASE("gradient is exactly H(y - xstar)") {
    quadratic.minimizer = Eigen::Vector2d(1.0, -1.0);
    const Eigen::Vector2d y(2.0, 3.0);
    const Eigen::VectorXd g = mm::gradient(quadratic, y);
    CHECK(g(0) == 1.0 * (2.0 - 1.0));
    CHECK(g(1) == 9.0 * (3.0 + 1.0));
  }
}
