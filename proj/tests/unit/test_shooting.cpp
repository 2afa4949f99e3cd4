#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "slosc/error.hpp"
#include "slosc/shooting.hpp"
#include "support.hpp"

using namespace slosc;
using slosc::test::kPi;

TEST_CASE("initial states") {
  CHECK(initial_state({0.0, 0.0}) == std::pair{0.0, 1.0});
  const auto neumann = initial_state({kPi, 0.0});
  CHECK(neumann.first == 1.0);
  CHECK(neumann.second == doctest::Approx(0.0).scale(1.0));
  const auto quarter = initial_state({kPi / 2, 0.0});
  CHECK(quarter.first == 1.0);
  CHECK(quarter.second == doctest::Approx(-1.0));
}

TEST_CASE("initial state satisfies the complex boundary identity") {
  // (U - 1) Y2 + i (U + 1) Y1 = 0 with U = exp(i theta).
  for (double theta : {0.3, 1.0, kPi / 2, 2.5, kPi, -0.7, -2.9}) {
    const auto [y1, y2] = initial_state({theta, 0.0});
    const std::complex<double> u = std::polar(1.0, theta);
    const std::complex<double> lhs = (u - 1.0) * y2 + std::complex<double>(0.0, 1.0) * (u + 1.0) * y1;
    CHECK(std::abs(lhs) < 1e-14);
  }
}

TEST_CASE("terminal state satisfies the right boundary condition") {
  for (double theta : {0.0, 0.4, kPi / 2, kPi, -1.3}) {
    for (double omega1 : {0.0, -3.5, 2.0}) {
      const BoundaryAngles bc{0.0, theta};
      const auto [y1, y2] = terminal_state(bc, omega1);
      if (theta == 0.0) {
        CHECK(y1 == 0.0);
      } else {
        CHECK(y2 + omega1 * y1 + bc.v22() * y1 == doctest::Approx(0.0).scale(1.0));
      }
    }
  }
}

TEST_CASE("classical eigenfunction at pi squared") {
  const Problem p = slosc::test::classical();
  const auto r = integrate(p, kPi * kPi);
  CHECK(std::abs(boundary_residual(r, r.omega1, p.bc)) < 1e-8);
  CHECK(std::abs(r.residual) < 1e-8);
  CHECK(r.zeros.empty());
  CHECK(r.end_zero);
  // Integration nodes need not hit the peak at 1/2, so fit the amplitude first.
  const auto n = normalized(r);
  std::size_t mid = 0;
  for (std::size_t i = 0; i < n.t.size(); ++i)
    if (std::abs(n.t[i] - 0.5) < std::abs(n.t[mid] - 0.5)) mid = i;
  const double amplitude = n.y1[mid] / std::sin(kPi * n.t[mid]);
  CHECK(amplitude == doctest::Approx(1.0).epsilon(1e-3));
  for (std::size_t i = 0; i < n.t.size(); ++i)
    CHECK(n.y1[i] == doctest::Approx(amplitude * std::sin(kPi * n.t[i])).epsilon(1e-8).scale(1.0));
}

TEST_CASE("linear solution at lambda zero") {
  const Problem p = slosc::test::classical();
  const auto r = integrate(p, 0.0);
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    const double s = std::exp(r.log_scale[i]);
    CHECK(r.y1[i] * s == doctest::Approx(r.t[i]).epsilon(1e-12).scale(1.0));
    CHECK(r.y2[i] * s == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(boundary_residual(r, r.omega1, p.bc) == doctest::Approx(1.0));
  CHECK(prufer_count(r) == 0);
  CHECK_FALSE(r.end_zero);
}

TEST_CASE("point mass bends the solution") {
  const Problem p = slosc::test::delta_well();
  const auto r = integrate(p, 0.0);
  // y = t up to 1/2, then slope 1 - 10 * (1/2) = -4.
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    const double t = r.t[i];
    const double expected = t <= 0.5 ? t : 0.5 - 4.0 * (t - 0.5);
    CHECK(r.y1[i] * std::exp(r.log_scale[i]) == doctest::Approx(expected).epsilon(1e-11).scale(1.0));
  }
  REQUIRE(r.zeros.size() == 1);
  CHECK(r.zeros[0].location == doctest::Approx(0.625).epsilon(1e-10));
  CHECK(r.zeros[0].sign_change);
  CHECK(boundary_residual(r, r.omega1, p.bc) * std::exp(r.log_scale.back()) == doctest::Approx(-1.5));
}

TEST_CASE("trajectory agrees with an independent integrator on the classical pair") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 4; ++trial) {
    const Problem p = slosc::test::random_problem(rng, true, trial % 2 ? 1.1 : 0.0, 0.0);
    const double lambda = 5.0 + 20.0 * trial;
    const auto r = integrate(p, lambda);
    const auto [y0, y20] = initial_state(p.bc);
    // At t = 0 the classical p y' equals Y2 + omega(0) Y1 = Y2.
    std::vector<double> at;
    std::vector<double> got;
    for (std::size_t i = 0; i < r.t.size(); i += std::max<std::size_t>(1, r.t.size() / 10)) {
      at.push_back(r.t[i]);
      got.push_back(r.y1[i] * std::exp(r.log_scale[i]));
    }
    const auto ref = slosc::test::reference_solution(p, lambda, y0, y20, at, 200000);
    double scale = 0.0;
    for (double v : ref) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < at.size(); ++i) CHECK(std::abs(got[i] - ref[i]) <= 1e-5 * scale);
  }
}

TEST_CASE("prufer counts") {
  const Problem p = slosc::test::classical();
  CHECK(prufer_count(integrate(p, 9 * kPi * kPi)) == 2);
  CHECK(prufer_count(integrate(p, -1e4)) == 0);
  CHECK(prufer_count(integrate(slosc::test::neumann(), kPi * kPi)) == 1);
  const auto r = integrate(p, 9.0 * kPi * kPi);
  REQUIRE(r.zeros.size() == 2);
  CHECK(r.zeros[0].location == doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK(r.zeros[1].location == doctest::Approx(2.0 / 3).epsilon(1e-9));
}

TEST_CASE("boundary residuals") {
  const Problem d = slosc::test::classical();
  CHECK(std::abs(boundary_residual(integrate(d, kPi * kPi), 0.0, d.bc)) < 1e-8);
  const Problem n = slosc::test::neumann();
  const auto r = integrate(n, 0.0);
  CHECK(std::abs(boundary_residual(r, r.omega1, n.bc)) < 1e-14);
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    CHECK(r.y1[i] == 1.0);
    CHECK(r.y2[i] == 0.0);
  }
}

TEST_CASE("Robin residual vanishes on tan k = k") {
  const Problem p = slosc::test::robin();
  const double k = slosc::test::root([](double x) { return std::tan(x) - x; }, 4.4, 4.6);
  const auto r = integrate(p, k * k);
  CHECK(std::abs(r.residual) < 1e-8);
  CHECK(std::abs(integrate(p, k * k + 0.5).residual) > 1e-3);
}

TEST_CASE("conjugate points") {
  const Problem p = slosc::test::classical();
  SUBCASE("classical at 4 pi^2") {
    const auto c = conjugate_points(p, 4 * kPi * kPi);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(c[1] == 1.0);
  }
  SUBCASE("below the ground state") {
    CHECK(conjugate_points(p, -50.0).empty());
    CHECK(right_conjugate_points(p, -50.0).empty());
  }
  SUBCASE("point mass at lambda zero") {
    const auto c = conjugate_points(slosc::test::delta_well(), 0.0);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == doctest::Approx(0.625).epsilon(1e-10));
  }
  SUBCASE("right side mirrors the left for the symmetric problem") {
    const auto left = conjugate_points(p, 4 * kPi * kPi);
    const auto right = right_conjugate_points(p, 4 * kPi * kPi);
    REQUIRE(right.size() == left.size());
    for (std::size_t i = 0; i < left.size(); ++i)
      CHECK(right[right.size() - 1 - i] == doctest::Approx(1.0 - left[i]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("backward shooting is forward shooting of the mirrored problem") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    const Problem p = slosc::test::random_problem(rng, true, 0.0, trial % 2 ? 0.8 : 0.0);
    for (double lambda : {-5.0, 30.0, 150.0}) {
      const auto right = right_conjugate_points(p, lambda);
      const auto mirror = conjugate_points(mirrored_problem(p), lambda);
      REQUIRE(right.size() == mirror.size());
      for (std::size_t i = 0; i < right.size(); ++i)
        CHECK(right[i] == doctest::Approx(1.0 - mirror[mirror.size() - 1 - i]).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("interior conjugate point counts from both ends") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const bool dirichlet = trial < 3;
    const Problem p = slosc::test::random_problem(rng, true, dirichlet ? 0.0 : 1.2, dirichlet ? 0.0 : -0.6);
    for (double lambda : {-7.0, 12.0, 55.0, 133.0, 310.0}) {
      const int left = prufer_count(integrate(p, lambda));
      const int right = prufer_count(integrate_backward(p, lambda));
      if (dirichlet) {
        CHECK(left == right);
      } else {
        CHECK(std::abs(left - right) <= 1);
      }
    }
  }
}

TEST_CASE("Pruefer angle is nondecreasing and zeros change sign") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 6; ++trial) {
    const Problem p = slosc::test::random_problem(rng, true, 0.7 * trial - 2.0, 0.5 * trial);
    for (double lambda : {-100.0, 0.0, 500.0, 5000.0}) {
      for (const auto& r : {integrate(p, lambda), integrate_backward(p, lambda)}) {
        for (std::size_t i = 1; i < r.theta.size(); ++i) CHECK(r.theta[i] >= r.theta[i - 1]);
        for (const auto& z : r.zeros) {
          CHECK(z.sign_change);
          CHECK(z.quasi_derivative_ratio > 0.5);
          CHECK(z.location > 0.0);
          CHECK(z.location < 1.0);
        }
        for (std::size_t i = 0; i < r.t.size(); ++i) CHECK(std::hypot(r.y1[i], r.y2[i]) > 0.0);
      }
    }
  }
}

TEST_CASE("large lambda stays finite through renormalization") {
  const Problem p = slosc::test::classical();
  const auto r = integrate(p, -1e6);
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    CHECK(std::isfinite(r.y1[i]));
    CHECK(std::hypot(r.y1[i], r.y2[i]) <= 1e6 * 1.01);
  }
  CHECK(r.log_scale.back() > 100.0);
  const auto hi = integrate(p, 1e6);
  CHECK(prufer_count(hi) == static_cast<int>(std::floor(1e3 / kPi)));
}

TEST_CASE("scaling all coefficients leaves zeros unchanged") {
  std::mt19937 rng(41);
  const Problem p = slosc::test::random_problem(rng);
  const Problem s = scaled_problem(p, 3.7);
  for (double lambda : {20.0, 90.0}) {
    const auto a = integrate(p, lambda);
    const auto b = integrate(s, lambda);
    REQUIRE(a.zeros.size() == b.zeros.size());
    for (std::size_t i = 0; i < a.zeros.size(); ++i)
      CHECK(a.zeros[i].location == doctest::Approx(b.zeros[i].location).epsilon(1e-8));
    CHECK(oscillation_index(a) == oscillation_index(b));
  }
}

TEST_CASE("shifting q by c r translates lambda by c") {
  const Problem p = slosc::test::classical();
  const Problem s = shifted_problem(p, 5.0);
  for (double lambda : {3.0, 40.0}) {
    const auto a = integrate(p, lambda);
    const auto b = integrate(s, lambda + 5.0);
    REQUIRE(a.zeros.size() == b.zeros.size());
    for (std::size_t i = 0; i < a.zeros.size(); ++i)
      CHECK(a.zeros[i].location == doctest::Approx(b.zeros[i].location).epsilon(1e-8));
  }
}

TEST_CASE("oscillation index counts eigenvalues below lambda") {
  const Problem p = slosc::test::classical();
  for (int n = 0; n <= 6; ++n) {
    const double between = std::pow((n + 0.5) * kPi, 2);
    CHECK(oscillation_index(integrate(p, between)) == n);
  }
  CHECK(oscillation_index(integrate(p, -3.0)) == 0);
}

TEST_CASE("normalized eigenfunction") {
  const Problem p = slosc::test::classical();
  const auto r = normalized(integrate(p, 4 * kPi * kPi));
  double mx = 0.0;
  for (double v : r.y1) mx = std::max(mx, std::abs(v));
  CHECK(mx == doctest::Approx(1.0));
  CHECK(r.y1[1] > 0.0);
  for (double s : r.log_scale) CHECK(s == 0.0);
}

TEST_CASE("invalid options raise step failure") {
  ShootOptions o;
  o.max_steps = 3;
  try {
    integrate(slosc::test::classical(), 1e5, o);
    FAIL("expected a step failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepFailure);
  }
}

TEST_CASE("invariant counters advance") {
  const auto before = invariant_counters();
  integrate(slosc::test::classical(), 50.0);
  const auto after = invariant_counters();
  CHECK(after.steps_checked > before.steps_checked);
  CHECK(after.zeros_checked > before.zeros_checked);
}
