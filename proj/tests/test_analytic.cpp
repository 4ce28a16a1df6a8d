// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#include <catch_amalgamated.hpp>

#include "simplexpow/analytic.hpp"
#include "simplexpow/oracle.hpp"
#include "simplexpow/probability.hpp"
#include "simplexpow/rng.hpp"

using namespace simplexpow;
using Catch::Matchers::WithinAbs;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(v.size());
  std::size_t i = 0;
  for (double e : v) out(i++) = e;
  return out;
}

}  // namespace

TEST_CASE("classification examples", "[analytic]") {
  CHECK(classify_exactness(vec({0, 0}), vec({1, 1}), 2).exact_case == ExactCase::Case1);
  auto a = classify_exactness(vec({0, 0}), vec({1, -1}), 2);
  CHECK(a.exact_case == ExactCase::Case3a);
  CHECK(a.mu == -1.0);
  CHECK(a.J_hat.empty());
  a = classify_exactness(vec({-2, 0}), vec({1, -1}), 2);
  CHECK(a.exact_case == ExactCase::Inexact);
  CHECK(a.J_hat == std::vector<std::size_t>{0});
  CHECK_THAT(a.sigma, WithinAbs(0.5, 1e-15));
  CHECK(*a.j_prime == 1);
  CHECK(classify_exactness(vec({1, 0}), vec({-1, -2}), 2).exact_case == ExactCase::Case2);
}

TEST_CASE("classification boundaries", "[analytic]") {
  // zero beta goes to J-
  auto a = classify_exactness(vec({0.1, 0.3}), vec({0.0, 0.5}), 2);
  CHECK(a.J_minus == std::vector<std::size_t>{0});
  // alpha_j = mu is excluded from J-hat
  a = classify_exactness(vec({-1, 0}), vec({1, -1}), 2);
  CHECK(a.exact_case == ExactCase::Case3a);
  // sigma = 1 counts as exact: alpha_1 = mu - kappa*beta_1 gives sigma = 1
  a = classify_exactness(vec({-3, 0}), vec({1, -1}), 2);
  CHECK_THAT(a.sigma, WithinAbs(1.0, 1e-15));
  CHECK(a.exact_case == ExactCase::Case3b);
  // ties for j' go to the lowest index
  a = classify_exactness(vec({0, 0, 0}), vec({-1, -1, 1}), 2);
  CHECK(*a.j_prime == 0);
}

TEST_CASE("water filling examples", "[analytic]") {
  auto r = water_fill(vec({0, 0}), vec({1, 1}), {0, 1}, 2, 1.0);
  CHECK_THAT(r.lambda, WithinAbs(1.0, 1e-10));
  CHECK_THAT(r.x(0), WithinAbs(0.5, 1e-12));
  CHECK_THAT(r.value, WithinAbs(0.5, 1e-12));
  r = water_fill(vec({0, 0}), vec({1, 3}), {0, 1}, 2, 1.0);
  CHECK_THAT(r.x(0), WithinAbs(0.75, 1e-12));
  CHECK_THAT(r.value, WithinAbs(0.75, 1e-12));
  r = water_fill(vec({0.3}), vec({2}), {0}, 3, 0.4);
  CHECK(r.x(0) == 0.4);
  CHECK_THROWS_AS(water_fill(vec({0}), vec({1}), {}, 2, 1.0), Error);
  CHECK_THROWS_AS(water_fill(vec({0}), vec({-1}), {0}, 2, 1.0), Error);
}

TEST_CASE("water filling satisfies the KKT conditions", "[analytic]") {
  Stream rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const double kappa = 1.1 + 3 * rng.uniform01();
    const double s = 0.05 + 2 * rng.uniform01();
    VectorXd a(n), b(n);
    for (auto& v : a) v = rng.uniform(-1, 1);
    for (auto& v : b) v = rng.uniform(0.01, 1);
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < n; ++j) idx[j] = j;
    const auto r = water_fill(a, b, idx, kappa, s);
    CHECK(std::abs(r.x.sum() - s) <= 1e-12 * std::max(1.0, s));
    for (std::size_t j = 0; j < n; ++j) {
      const double grad = a(j) + kappa * b(j) * std::pow(r.x(j), kappa - 1);
      if (r.x(j) > 1e-9)
        CHECK(std::abs(grad - r.lambda) <= 1e-6 * std::max(1.0, std::abs(r.lambda)));
      else
        CHECK(grad >= r.lambda - 1e-6);
    }
  }
}

TEST_CASE("closed-form P examples", "[analytic]") {
  auto p = solve_p_closed_form(vec({-2, 0}), vec({1, -1}), 2);
  CHECK_THAT(p.value, WithinAbs(-1.25, 1e-12));
  CHECK_THAT(p.x(0), WithinAbs(0.5, 1e-12));
  CHECK_THAT(p.y(0), WithinAbs(0.25, 1e-12));
  CHECK_THAT(p.y(1), WithinAbs(0.5, 1e-12));
  p = solve_p_closed_form(vec({0, 0}), vec({1, 1}), 2);
  CHECK_THAT(p.value, WithinAbs(0.5, 1e-12));
  p = solve_p_closed_form(vec({1, 0}), vec({-1, -2}), 2);
  CHECK(p.value == -2.0);
  CHECK(p.x(1) == 1.0);
  CHECK_THROWS_AS(solve_p_closed_form(vec({0}), vec({0, 1}), 2), Error);
}

TEST_CASE("closed-form value is attained by its point", "[analytic]") {
  Stream rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const double kappa = std::array{1.25, 1.5, 1.75, 2.0, 2.5, 3.0}[rng.below(6)];
    VectorXd a, b;
    draw_coefficients(rng, Distribution::Normal, n, a, b);
    const auto p = solve_p_closed_form(a, b, kappa);
    CHECK_THAT(p.x.sum(), WithinAbs(1.0, 1e-12));
    CHECK(p.x.minCoeff() >= 0.0);
    CHECK_THAT(a.dot(p.x) + b.dot(p.y), WithinAbs(p.value, 1e-10));
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(p.y(j) <= p.x(j) + 1e-15);
      CHECK(p.y(j) >= std::pow(p.x(j), kappa) - 1e-15);
    }
  }
}

TEST_CASE("classifier agrees with the oracle", "[analytic]") {
  Stream rng(3);
  int exact = 0, inexact = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    const double kappa = std::array{1.25, 1.5, 1.75, 2.0, 2.5, 3.0}[rng.below(6)];
    VectorXd a, b;
    draw_coefficients(rng, Distribution::Uniform, n, a, b);
    const Instance inst = Instance::simplex(kappa, a, b);
    const auto p = solve_p_closed_form(inst);
    const double z = solve_global_simplex(inst).value;
    const double gap = z - p.value;
    if (p.analysis.exact()) {
      ++exact;
      CHECK(std::abs(gap) <= 1e-7);
    } else {
      ++inexact;
      CHECK(gap > 0);
      CHECK(gap <= p_gap_upper_bound(a, b, kappa) + 1e-8);
    }
  }
  CHECK(exact > 0);
  CHECK(inexact > 0);
}

TEST_CASE("objective bound examples", "[analytic]") {
  CHECK_THAT(p_gap_upper_bound(vec({0, 0}), vec({1, -1}), 2), WithinAbs(0.25, 1e-15));
  CHECK_THAT(p_gap_upper_bound(vec({0, 0}), vec({1, -1}), 3), WithinAbs(std::pow(3, -0.5) - std::pow(3, -1.5), 1e-15));
  CHECK_THAT(p_gap_upper_bound(vec({0, 0}), vec({1, -1}), 3), WithinAbs(0.3849, 1e-4));
  CHECK(p_gap_upper_bound(vec({0, 0}), vec({1, 0}), 2) == 0.0);
  CHECK(p_gap_upper_bound(vec({0, 0}), vec({1, 1}), 2) == 0.0);
}

TEST_CASE("distance bounds", "[analytic]") {
  CHECK_THAT(distance_upper_bound(4, 2), WithinAbs(0.75, 1e-15));
  CHECK_THAT(distance_upper_bound(9, 2), WithinAbs(0.888888889, 1e-9));
  CHECK_THAT(distance_upper_bound(2, 2), WithinAbs(0.5, 1e-15));
  CHECK_THROWS_AS(distance_upper_bound(1, 2), Error);
  for (std::size_t n = 2; n <= 10; ++n)
    for (double k : {1.25, 1.5, 2.0, 3.0}) {
      const auto w = distance_lb_witness(n, k);
      CHECK(w.value == distance_upper_bound(n, k));
      CHECK_THAT(w.x.sum(), WithinAbs(1.0, 1e-15));
    }
}

TEST_CASE("one-dimensional minimizer at 1/n", "[analytic]") {
  // |x - 1/n| + |x^k - 1/n| + x over a fine grid
  const double n = 10, k = 3;
  double best = std::numeric_limits<double>::infinity(), arg = -1;
  for (int i = 0; i <= 1000000; ++i) {
    const double x = i * 1e-6;
    const double f = std::abs(x - 1 / n) + std::abs(std::pow(x, k) - 1 / n) + x;
    if (f < best) best = f, arg = x;
  }
  CHECK_THAT(arg, WithinAbs(0.1, 1e-6));
}

TEST_CASE("n = 2 convex combinations", "[analytic]") {
  using R = Rational;
  auto c = decompose_n2<R>({R(1, 2), R(1, 2)}, {R(3, 8), R(3, 8)});
  CHECK(c.weight == R(2, 3));
  REQUIRE(c.points.size() == 2);
  CHECK(c.points[0].x == std::array<R, 2>{R(3, 4), R(1, 4)});
  CHECK(c.points[0].y == std::array<R, 2>{R(9, 16), R(1, 16)});
  for (int j = 0; j < 2; ++j) {
    R xs = 0, ys = 0;
    for (const auto& t : c.points) {
      xs += t.coefficient * t.x[j];
      ys += t.coefficient * t.y[j];
      CHECK(t.y[j] == t.x[j] * t.x[j]);
    }
    CHECK(xs == R(1, 2));
    CHECK(ys == R(3, 8));
  }
  c = decompose_n2<R>({R(0), R(1)}, {R(0), R(1)});
  CHECK(c.points.size() == 1);
  c = decompose_n2<R>({R(1, 2), R(1, 2)}, {R(1, 4), R(1, 4)});
  CHECK(c.weight == 1);
  CHECK(c.points.size() == 1);
  CHECK_THROWS_AS(decompose_n2<R>({R(1, 2), R(1, 2)}, {R(1, 2), R(1, 4)}), Error);
}

TEST_CASE("n = 2 decomposition on random PR points", "[analytic]") {
  using R = Rational;
  Stream rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    // x1 = p/q, d = x1 - y1 = x2 - y2 chosen inside the P box
    const R x1(static_cast<long>(1 + rng.below(99)), 100);
    const R x2 = 1 - x1;
    const R dmax = std::min(x1 - x1 * x1, x2 - x2 * x2);
    const R d = dmax * R(static_cast<long>(rng.below(101)), 100);
    const std::array<R, 2> x = {x1, x2}, y = {x1 - d, x2 - d};
    const auto c = decompose_n2<R>(x, y);
    R wsum = 0;
    std::array<R, 2> xs{0, 0}, ys{0, 0};
    for (const auto& t : c.points) {
      CHECK(t.coefficient >= 0);
      CHECK(t.x[0] + t.x[1] == 1);
      for (int j = 0; j < 2; ++j) {
        CHECK(t.x[j] >= 0);
        CHECK(t.y[j] == t.x[j] * t.x[j]);
        xs[j] += t.coefficient * t.x[j];
        ys[j] += t.coefficient * t.y[j];
      }
      wsum += t.coefficient;
    }
    CHECK(wsum == 1);
    CHECK(xs == x);
    CHECK(ys == y);
  }
}

TEST_CASE("P optima sit on extreme points", "[analytic]") {
  // vertices of the n = 2 P region found by linear objectives have y_j in {x_j, x_j^k}
  for (double k : {1.5, 2.0, 3.0})
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j) {
        const VectorXd a = vec({-1 + i / 10.0, 0.0}), b = vec({-1 + j / 10.0, 0.5 - j / 20.0});
        const auto p = solve_p_closed_form(a, b, k);
        for (int q = 0; q < 2; ++q) {
          const double xq = p.x(q), yq = p.y(q);
          CHECK((std::abs(yq - xq) <= 1e-15 || std::abs(yq - std::pow(xq, k)) <= 1e-15));
        }
      }
}
