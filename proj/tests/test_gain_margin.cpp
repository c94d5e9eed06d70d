#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "momentum_margin/gain_margin.hpp"
#include "momentum_margin/spectral_analysis.hpp"
#include "test_helpers.hpp"

namespace mm = momentum_margin;

TEST_CASE("optimal rate closed form") {
  CHECK(mm::rho_star({1.0, 9.0}) == 0.5);
  CHECK(std::abs(mm::rho_star({1.0, 100.0}) - 9.0 / 11.0) <= 1e-15);
  CHECK(std::abs(mm::rho_star({2.0, 50.0}) - 2.0 / 3.0) <= 1e-15);
  CHECK(mm::rho_star({2.0, 2.0}) == 0.0);
  CHECK(mm::rho_star({1e-6, 1e6}) < 1.0);
  CHECK_THROWS_AS(mm::rho_star({0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("optimal rate grows with the curvature ratio") {
  double previous = -1.0;
  for (double ratio : {1.0, 2.0, 5.0, 10.0, 100.0, 1e4, 1e6}) {
    const double value = mm::rho_star({1.0, ratio});
    CHECK(value > previous);
    CHECK(value >= 0.0);
    CHECK(value < 1.0);
    previous = value;
  }
}

TEST_CASE("forbidden rays for (1, 9)") {
  const mm::ForbiddenSet set = mm::forbidden_set({1.0, 9.0});
  CHECK(set.left_bound == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(set.right_bound == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(set.contains(-0.25));
  CHECK(set.contains(-5.0));
  CHECK(set.contains(2.25));
  CHECK(set.contains(100.0));
  CHECK_FALSE(set.contains(0.0));
  CHECK_FALSE(set.contains(1.0));
  CHECK_FALSE(set.contains(2.2));
  CHECK_FALSE(set.contains(-0.2));
}

TEST_CASE("forbidden set is empty when the class degenerates") {
  const mm::ForbiddenSet set = mm::forbidden_set({3.0, 3.0});
  CHECK_FALSE(set.contains(-1e12));
  CHECK_FALSE(set.contains(0.0));
  CHECK_FALSE(set.contains(1e12));
}

TEST_CASE("conformal map interpolation identities") {
  const mm::FunctionClass fc{1.0, 9.0};
  const std::complex<double> at_zero = mm::theta({0.0, 0.0}, fc);
  CHECK(at_zero.real() == 0.0);
  CHECK(at_zero.imag() == 0.0);

  const std::complex<double> at_one = mm::theta({1.0, 0.0}, fc);
  CHECK(std::abs(at_one - std::complex<double>(0.5, 0.0)) <= 1e-12);

  SUBCASE("random classes up to ratio 1e6") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      const double m = test_helpers::log_uniform(rng, 1e-3, 1e3);
      const double ratio = test_helpers::log_uniform(rng, 1.0, 1e6);
      const mm::FunctionClass random_fc{m, m * ratio};
      CAPTURE(m);
      CAPTURE(ratio);
      const std::complex<double> zero = mm::theta({0.0, 0.0}, random_fc);
      CHECK(zero == std::complex<double>(0.0, 0.0));
      CHECK(std::abs(mm::theta({1.0, 0.0}, random_fc) - mm::rho_star(random_fc)) <= 1e-12);
    }
  }
}

TEST_CASE("conformal map lands inside the unit disk") {
  const mm::FunctionClass fc{1.0, 9.0};
  const mm::ForbiddenSet set = mm::forbidden_set(fc);
  const double lo = set.left_bound;
  const double hi = set.right_bound;
  for (int i = 1; i < 200; ++i) {
    const double x = lo + (hi - lo) * i / 200.0;
    CAPTURE(x);
    CHECK(std::abs(mm::theta({x, 0.0}, fc)) < 1.0);
  }
  // Complex arguments are fine even above the excluded rays.
  CHECK(std::abs(mm::theta({3.0, 0.5}, fc)) < 1.0);
  CHECK(std::abs(mm::theta({-1.0, 1e-3}, fc)) < 1.0);
}

TEST_CASE("conformal map rejects the forbidden rays") {
  const mm::FunctionClass fc{1.0, 9.0};
  CHECK_THROWS_AS(mm::theta({-0.25, 0.0}, fc), std::domain_error);
  CHECK_THROWS_AS(mm::theta({2.25, 0.0}, fc), std::domain_error);
  CHECK_THROWS_AS(mm::theta({-1.0, 0.0}, fc), std::domain_error);
  CHECK_THROWS_AS(mm::theta({3.0, 0.0}, fc), std::domain_error);
}

TEST_CASE("degenerate class maps everything to zero") {
  const mm::FunctionClass fc{3.0, 3.0};
  CHECK(mm::theta({0.7, 0.0}, fc) == std::complex<double>(0.0, 0.0));
  CHECK(mm::theta({-5.0, 2.0}, fc) == std::complex<double>(0.0, 0.0));
  CHECK(mm::rho_star(fc) == 0.0);
}

TEST_CASE("pick matrix feasibility on (1, 9)") {
  SUBCASE("above the threshold") {
    const mm::FeasibilityReport report = mm::pick_feasible({{1.0, 9.0}, 0.6});
    CHECK(report.feasible);
    CHECK(report.rho == 0.6);
    CHECK(report.rho_star == 0.5);
    CHECK(report.pick_matrix(0, 0) == 0.75);
    CHECK(report.pick_matrix(0, 1) == 1.0);
    CHECK(report.pick_matrix(1, 0) == 1.0);
    CHECK(report.pick_matrix(1, 1) == doctest::Approx(1.0 / 0.64).epsilon(1e-15));
    CHECK(report.determinant == doctest::Approx(0.171875).epsilon(1e-14));
  }
  SUBCASE("exactly at the threshold the determinant vanishes") {
    const mm::FeasibilityReport report = mm::pick_feasible({{1.0, 9.0}, 0.5});
    CHECK(report.determinant == 0.0);
    CHECK_FALSE(report.feasible);
  }
  SUBCASE("below the threshold") {
    const mm::FeasibilityReport report = mm::pick_feasible({{1.0, 9.0}, 0.4});
    CHECK_FALSE(report.feasible);
    CHECK(report.determinant == doctest::Approx(0.75 / 0.84 - 1.0).epsilon(1e-14));
    CHECK(report.determinant < 0.0);
  }
  SUBCASE("rho outside (0, 1) is an input error") {
    CHECK_THROWS_AS(mm::pick_feasible({{1.0, 9.0}, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(mm::pick_feasible({{1.0, 9.0}, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(mm::pick_feasible({{1.0, 9.0}, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(mm::pick_feasible({{1.0, 9.0}, 1.5}), std::invalid_argument);
  }
  SUBCASE("degenerate class is always feasible") {
    for (double rho : {0.01, 0.5, 0.99}) {
      CHECK(mm::pick_feasible({{2.0, 2.0}, rho}).feasible);
    }
  }
}

TEST_CASE("feasibility equivalence on grids") {
  SUBCASE("flip brackets rho_star for (1, 9)") {
    const std::vector<double> grid = {0.1, 0.3, 0.5 - 1e-6, 0.5 + 1e-6, 0.7, 0.9};
    const auto points = mm::margin_equivalence_check({1.0, 9.0}, grid);
    REQUIRE(points.size() == grid.size());
    for (const auto& point : points) {
      CAPTURE(point.rho);
      CHECK(point.pick_feasible == point.exceeds_rho_star);
    }
    CHECK_FALSE(points[2].pick_feasible);
    CHECK(points[3].pick_feasible);
  }
  SUBCASE("degenerate class feasible everywhere") {
    const std::vector<double> grid = {0.1, 0.4, 0.8};
    for (const auto& point : mm::margin_equivalence_check({2.0, 2.0}, grid)) {
      CHECK(point.pick_feasible);
      CHECK(point.exceeds_rho_star);
    }
  }
  SUBCASE("flip sits at 9/11 for (1, 100)") {
    std::vector<double> grid;
    for (int i = 1; i < 100; ++i) grid.push_back(i / 100.0);
    const auto points = mm::margin_equivalence_check({1.0, 100.0}, grid);
    const double rs = 9.0 / 11.0;
    for (const auto& point : points) {
      CAPTURE(point.rho);
      CHECK(point.pick_feasible == point.exceeds_rho_star);
      CHECK(point.pick_feasible == (point.rho > rs));
    }
  }
}

TEST_CASE("feasibility agrees with the threshold for random triples") {
  std::mt19937_64 rng(77);
  int checked = 0;
  while (checked < 100) {
    const double m = test_helpers::log_uniform(rng, 0.1, 10.0);
    const double ratio = test_helpers::log_uniform(rng, 1.0 + 1e-9, 1e4);
    const mm::FunctionClass fc{m, m * ratio};
    const double rho = test_helpers::uniform(rng, 1e-6, 1.0 - 1e-6);
    if (std::abs(rho - mm::rho_star(fc)) <= 1e-12) continue;
    ++checked;
    CAPTURE(m);
    CAPTURE(ratio);
    CAPTURE(rho);
    CHECK(mm::pick_feasible({fc, rho}).feasible == (rho > mm::rho_star(fc)));
  }
}

TEST_CASE("certified region contains every achievable preset rate") {
  const mm::FunctionClass fc{1.0, 9.0};
  for (mm::Preset which : mm::kAllPresets) {
    const mm::RateReport report = mm::worst_case_rho(mm::preset(which, fc), fc);
    REQUIRE(report.converging);
    const double target = std::min(report.worst_rho + 1e-6, 1.0 - 1e-12);
    CAPTURE(mm::preset_name(which));
    CHECK(mm::pick_feasible({fc, target}).feasible);
  }
}
