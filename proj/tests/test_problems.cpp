#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "viamr/problems.hpp"

#include <cmath>
#include <random>

using namespace viamr;

TEST_CASE("radial constants satisfy the smooth-fit identities") {
  const BallConstants c = ball_constants();

  // frozen reference values
  CHECK(c.r0 == 0.9);
  CHECK(std::abs(c.a - 0.697965148223374) <= 1e-12);
  CHECK(std::abs(c.A - 0.680259411891719) <= 1e-12);
  CHECK(std::abs(c.B - 0.471519893402112) <= 1e-12);

  // defining equation and matching conditions
  CHECK(std::abs(c.a * c.a * std::log(2.0 / c.a) - (1.0 - c.a * c.a)) <= 1e-15);
  CHECK(std::abs(-c.A * std::log(2.0) + c.B) <= 1e-15);                         // u(2) = 0
  CHECK(std::abs((-c.A * std::log(c.a) + c.B) - std::sqrt(1.0 - c.a * c.a)) <=
        1e-14);                                                                 // value match
  CHECK(std::abs(-c.A / c.a + c.a / std::sqrt(1.0 - c.a * c.a)) <= 1e-12);      // slope match

  // independent bisection oracle for the contact radius
  double lo = 0.5, hi = 0.8;
  const auto phi = [](double a) { return a * a * std::log(2.0 / a) - (1.0 - a * a); };
  REQUIRE(phi(lo) < 0.0);
  REQUIRE(phi(hi) > 0.0);
  for (int k = 0; k < 100; ++k) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < 0.0 ? lo : hi) = mid;
  }
  CHECK(std::abs(c.a - 0.5 * (lo + hi)) <= 1e-12);
}

TEST_CASE("sphere-cap obstacle: geometry, matching and feasibility") {
  const ObstacleProblem p = ball_obstacle();
  const BallConstants c = ball_constants();

  CHECK(p.psi(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

  // C^1 continuity across the cap/tangent switch radius
  const double eps = 1e-7;
  const double below = p.psi(c.r0 - eps, 0.0), above = p.psi(c.r0 + eps, 0.0);
  CHECK(std::abs(above - below) <= 1e-6);
  const double slope_below = (p.psi(c.r0, 0.0) - p.psi(c.r0 - eps, 0.0)) / eps;
  const double slope_above = (p.psi(c.r0 + eps, 0.0) - p.psi(c.r0, 0.0)) / eps;
  CHECK(std::abs(slope_above - slope_below) <= 1e-5);

  // exact solution identities
  CHECK(std::abs(p.exact(2.0, 0.0)) <= 1e-6);
  CHECK(p.exact(c.a, 0.0) == doctest::Approx(0.716131728).epsilon(1e-4));
  CHECK(p.exact(c.a, 0.0) == doctest::Approx(p.psi(c.a, 0.0)).epsilon(1e-12));

  REQUIRE(p.has_exact);
  REQUIRE(p.has_exact_free_boundary);
  CHECK(feasible_boundary(p));

  // exact solution dominates the obstacle on a sampled grid
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double x = -2.0 + 4.0 * i / 40.0, y = -2.0 + 4.0 * j / 40.0;
      CHECK(p.exact(x, y) >= p.psi(x, y) - 1e-12);
    }
  }

  // contact predicate and parametric boundary agree on the circle r = a
  CHECK(p.exact_active(0.0, 0.0));
  CHECK(!p.exact_active(1.0, 1.0));
  for (int k = 0; k < 16; ++k) {
    const Eigen::Vector2d pt = p.free_boundary_point(k / 16.0);
    CHECK(pt.norm() == doctest::Approx(c.a).epsilon(1e-14));
    CHECK(p.exact(pt.x(), pt.y()) == doctest::Approx(p.psi(pt.x(), pt.y())).epsilon(1e-12));
  }

  // gradient of the exact solution vs a finite-difference oracle
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-1.9, 1.9);
  const double h = 1e-6;
  for (int k = 0; k < 30; ++k) {
    const double x = dist(rng), y = dist(rng);
    const double r = std::hypot(x, y);
    if (std::abs(r - c.a) < 1e-2) continue;  // kink of the exact solution
    const Eigen::Vector2d g = p.exact_grad(x, y);
    const double gx = (p.exact(x + h, y) - p.exact(x - h, y)) / (2.0 * h);
    const double gy = (p.exact(x, y + h) - p.exact(x, y - h)) / (2.0 * h);
    CHECK(std::abs(g.x() - gx) <= 1e-6);
    CHECK(std::abs(g.y() - gy) <= 1e-6);
  }
}

TEST_CASE("spiral obstacle: special origin value and boundary feasibility") {
  const ObstacleProblem p = spiral_obstacle();
  CHECK(p.lo == -1.0);
  CHECK(p.hi == 1.0);
  CHECK(p.psi(0.0, 0.0) == 3.6);
  CHECK(!p.has_exact);
  CHECK(!p.has_exact_free_boundary);
  CHECK(feasible_boundary(p));
  for (int k = 0; k <= 64; ++k) {
    const double t = -1.0 + 2.0 * k / 64.0;
    CHECK(p.psi(t, 1.0) <= 0.0);
    CHECK(p.psi(t, -1.0) <= 0.0);
    CHECK(p.psi(1.0, t) <= 0.0);
    CHECK(p.psi(-1.0, t) <= 0.0);
  }
  // the obstacle rises above the zero boundary data in the interior
  CHECK(p.psi(0.05, 0.0) > 0.0);
}

TEST_CASE("harmonic reference: point values, laplacian and gradient oracles") {
  const PoissonProblem p = poisson_reference();
  CHECK(p.exact(0.0, 0.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(p.exact(1.0, 1.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(p.load(0.3, -0.4) == 0.0);
  CHECK(p.dirichlet(1.0, 0.5) == p.exact(1.0, 0.5));

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-0.9, 0.9);
  const double h = 1e-4;
  for (int k = 0; k < 20; ++k) {
    const double x = dist(rng), y = dist(rng);
    const double lap = (p.exact(x + h, y) + p.exact(x - h, y) + p.exact(x, y + h) +
                        p.exact(x, y - h) - 4.0 * p.exact(x, y)) /
                       (h * h);
    CHECK(std::abs(lap) <= 1e-6);
    const Eigen::Vector2d g = p.exact_grad(x, y);
    const double gx = (p.exact(x + h, y) - p.exact(x - h, y)) / (2.0 * h);
    const double gy = (p.exact(x, y + h) - p.exact(x, y - h)) / (2.0 * h);
    CHECK(std::abs(g.x() - gx) <= 1e-6);
    CHECK(std::abs(g.y() - gy) <= 1e-6);
  }
}

TEST_CASE("discrete obstacle solve converges on the analytic configuration") {
  const ObstacleProblem p = ball_obstacle();
  const BallConstants c = ball_constants();

  double prev_l2 = 0.0;
  for (int k = 0; k < 2; ++k) {
    const int n = 8 << k;
    const Mesh m = build_structured_square(n, p.lo, p.hi);
    const VISolveResult res = solve_obstacle(m, p);
    CHECK((res.reason == ConvergedReason::atol || res.reason == ConvergedReason::rtol));

    const FieldP1 psi = interpolate_p1(m, p.psi);
    CHECK((res.u - psi.values).minCoeff() >= -1e-12);  // feasibility

    const double l2 = error_l2(FieldP1{&m, res.u}, p.exact);
    if (k == 1) CHECK(prev_l2 / l2 > 2.0);  // error drops under refinement
    prev_l2 = l2;

    // contact vertices stay near the analytic contact disk
    const double h = 4.0 / n * std::sqrt(2.0);
    for (int id : res.active) CHECK(m.vertices[id].norm() <= c.a + 2.0 * h);
  }
}

TEST_CASE("boundary data below the obstacle is rejected at assembly") {
  ObstacleProblem bad;
  bad.lo = 0.0;
  bad.hi = 1.0;
  bad.psi = [](double, double) { return 0.0; };
  bad.load = [](double, double) { return 0.0; };
  bad.dirichlet = [](double, double) { return -10.0; };
  const Mesh m = build_structured_square(4, bad.lo, bad.hi);
  CHECK(!feasible_boundary(bad));
  CHECK_THROWS_AS(discretize_obstacle(m, bad), std::invalid_argument);
}

TEST_CASE("1d analytic data: tangent slope, continuity, endpoints") {
  const double b = exact_1d_free_boundary();
  CHECK(b == doctest::Approx((2.0 - std::sqrt(2.0)) / 2.0).epsilon(1e-16));

  // slope of the tangent segment is -2b
  const double d = 1e-7;
  const double slope = (exact_1d_obstacle(b + 2.0 * d) - exact_1d_obstacle(b + d)) / d;
  CHECK(slope == doctest::Approx(-2.0 * b).epsilon(1e-6));

  CHECK(exact_1d_obstacle(b) == doctest::Approx(0.5 - b * b).epsilon(1e-15));
  CHECK(std::abs(exact_1d_obstacle(b + 1e-12) - exact_1d_obstacle(b - 1e-12)) <= 1e-10);
  CHECK(exact_1d_obstacle(1.0) == 0.0);
  CHECK(exact_1d_obstacle(-1.0) == 0.0);
  CHECK(exact_1d_obstacle(0.0) == 0.5);
  CHECK(exact_1d_obstacle(-0.3) == exact_1d_obstacle(0.3));  // even symmetry

  CHECK(exact_1d_poisson(0.0) == -0.5);
  CHECK(exact_1d_poisson(1.0) == 0.0);
}

TEST_CASE("1d obstacle solves match the frozen cross-language oracle") {
  const double expect_l2[4] = {6.239751e-4, 1.627460e-4, 3.603972e-5, 1.315594e-5};
  const double expect_gap[4] = {1.960678e-2, 1.164322e-2, 3.981781e-3, 3.830719e-3};
  const int ns[4] = {32, 64, 128, 256};
  for (int k = 0; k < 4; ++k) {
    const Result1D r = solve_1d_obstacle(ns[k]);
    CHECK((r.reason == ConvergedReason::atol || r.reason == ConvergedReason::rtol));
    CHECK(r.l2_error == doctest::Approx(expect_l2[k]).epsilon(1e-4));
    CHECK(r.fb_gap == doctest::Approx(expect_gap[k]).epsilon(1e-4));
    // the discrete free boundary sits within one cell of the true one
    CHECK(r.fb_gap <= 2.0 / ns[k]);
    // solution is feasible and zero at the ends
    CHECK(r.u[0] == 0.0);
    CHECK(r.u[r.u.size() - 1] == 0.0);
    for (Eigen::Index i = 0; i < r.x.size(); ++i)
      CHECK(r.u[i] >= 0.5 - r.x[i] * r.x[i] - 1e-12);
  }
}

TEST_CASE("1d poisson is nodally exact and converges at second order") {
  // hand-solved 3-node system: single interior unknown u(0) = -1/2
  const Result1D r2 = solve_1d_poisson(2);
  CHECK(r2.u[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r2.u[1] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(r2.u[2] == doctest::Approx(0.0).epsilon(1e-14));

  const Result1D r64 = solve_1d_poisson(64);
  for (Eigen::Index i = 0; i < r64.x.size(); ++i)
    CHECK(r64.u[i] == doctest::Approx(exact_1d_poisson(r64.x[i])).epsilon(1e-9).scale(1.0));

  double prev = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Result1D r = solve_1d_poisson(32 << k);
    if (k > 0) {
      const double ratio = prev / r.l2_error;
      CHECK(ratio > 2.8);  // quarters, +-30%
      CHECK(ratio < 5.2);
    }
    prev = r.l2_error;
  }
}
