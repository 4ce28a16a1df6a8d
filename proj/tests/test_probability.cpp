// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#include <catch_amalgamated.hpp>

#include "simplexpow/probability.hpp"

using namespace simplexpow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

/// Composite Simpson rule for the I_m integrand on [-1, 0].
double i_m_quadrature(std::size_t n, std::size_t m) {
  const int steps = 20000;
  const double h = 1.0 / steps;
  auto f = [&](double z) {
    return std::pow(0.25 - 0.5 * z, static_cast<double>(n - m)) * std::pow(1 - z, static_cast<double>(m - 1));
  };
  double s = f(-1) + f(0);
  for (int i = 1; i < steps; ++i) s += (i % 2 ? 4 : 2) * f(-1 + i * h);
  return s * h / 3;
}

}  // namespace

TEST_CASE("I_m examples", "[probability]") {
  CHECK(i_m_exact(2)[0] == Rational(1, 2));
  CHECK_THAT(i_m(2, 1), WithinAbs(0.5, 1e-15));
  CHECK_THAT(i_m(4, 2), WithinRel(i_m_quadrature(4, 2), 1e-10));
  for (std::size_t n : {3, 5, 9, 17})
    for (std::size_t m = 1; m < n; ++m) CHECK_THAT(i_m(n, m), WithinRel(i_m_quadrature(n, m), 1e-9));
  CHECK_THROWS_AS(i_m(1, 1), Error);
  CHECK_THROWS_AS(i_m(4, 4), Error);
  CHECK_THROWS_AS(i_m(4, 0), Error);
}

TEST_CASE("I_m terms are probabilities", "[probability]") {
  for (std::size_t n = 2; n <= 64; ++n) {
    const auto I = i_m_exact(n);
    for (std::size_t m = 1; m < n; ++m) {
      CHECK(I[m - 1] >= 0);
      CHECK(Rational(static_cast<long>(m)) * detail::pow2(-static_cast<int>(m)) * I[m - 1] <= 1);
    }
  }
}

TEST_CASE("exact Case 3a probability table", "[probability]") {
  CHECK(prob_case3a_exact(2).p_case3a == Rational(17, 48));
  const std::array<std::pair<std::size_t, double>, 6> exact = {{{2, 0.354166666667},
                                                                {4, 0.643470982143},
                                                                {8, 0.824280025094},
                                                                {16, 0.940951195896},
                                                                {32, 0.993030081248},
                                                                {64, 0.999902840472}}};
  for (auto [n, p] : exact) CHECK_THAT(prob_case3a(n).p_case3a, WithinAbs(p, 1e-12));
  // four-decimal reference values are truncated, not rounded
  const std::array<std::pair<std::size_t, int>, 6> table = {
      {{2, 3541}, {4, 6434}, {8, 8242}, {16, 9409}, {32, 9930}, {64, 9999}}};
  for (auto [n, digits] : table) CHECK(static_cast<int>(std::floor(prob_case3a(n).p_case3a * 1e4)) == digits);
}

TEST_CASE("lower bound holds and the probability grows", "[probability]") {
  Rational prev = 0;
  for (std::size_t n = 2; n <= 128; ++n) {
    const auto e = prob_case3a_exact(n);
    CHECK(e.p_case3a >= e.lower_bound);
    CHECK(e.p_case3a <= 1);
    if (n >= 4) CHECK(e.p_case3a >= prev);
    prev = e.p_case3a;
    const auto d = prob_case3a(n);
    CHECK(d.bound_holds);
    CHECK(d.I.size() == n - 1);
  }
}

TEST_CASE("Monte Carlo Case 3a frequency matches the exact value", "[probability]") {
  for (std::size_t n : {2, 4, 8, 16}) {
    const std::size_t samples = 40000;
    const auto est = simulate_exactness(Distribution::Uniform, 2.0, n, samples, 77);
    const double freq = static_cast<double>(est.per_case_counts.at(ExactCase::Case3a)) / samples;
    const double p = prob_case3a(n).p_case3a;
    const double se = std::sqrt(p * (1 - p) / samples);
    INFO("n " << n << " freq " << freq << " exact " << p);
    CHECK(std::abs(freq - p) <= 4 * se);
    CHECK(est.p_hat >= freq);
  }
}

TEST_CASE("Case 3a frequency does not depend on kappa", "[probability]") {
  // the Case 3a test compares alpha against mu only
  for (double k : {1.25, 3.0}) {
    const auto est = simulate_exactness(Distribution::Uniform, k, 8, 40000, 5);
    const double freq = static_cast<double>(est.per_case_counts.at(ExactCase::Case3a)) / 40000;
    const double p = prob_case3a(8).p_case3a;
    CHECK(std::abs(freq - p) <= 4 * std::sqrt(p * (1 - p) / 40000));
  }
}

TEST_CASE("simulation is deterministic and shard independent", "[probability]") {
  const auto a = simulate_exactness(Distribution::Normal, 1.5, 6, 5000, 123, 1);
  const auto b = simulate_exactness(Distribution::Normal, 1.5, 6, 5000, 123, 3);
  const auto c = simulate_exactness(Distribution::Normal, 1.5, 6, 5000, 123, 1);
  CHECK(a.p_hat == b.p_hat);
  CHECK(a.per_case_counts == b.per_case_counts);
  CHECK(a.p_hat == c.p_hat);
  const auto d = simulate_exactness(Distribution::Normal, 1.5, 6, 5000, 124, 1);
  CHECK(d.per_case_counts != a.per_case_counts);
  std::size_t total = 0;
  for (const auto& [k, v] : a.per_case_counts) total += v;
  CHECK(total == 5000);
}

TEST_CASE("standard error formula", "[probability]") {
  const auto e = simulate_exactness(Distribution::Uniform, 2.0, 3, 2000, 9);
  CHECK(e.samples == 2000);
  CHECK(e.seed == 9);
  CHECK_THAT(e.std_error, WithinAbs(std::sqrt(e.p_hat * (1 - e.p_hat) / 2000), 1e-15));
  CHECK_THROWS_AS(simulate_exactness(Distribution::Uniform, 2.0, 3, 0, 9), Error);
}

TEST_CASE("distribution names", "[probability]") {
  CHECK(parse_distribution("uniform") == Distribution::Uniform);
  CHECK(parse_distribution("normal") == Distribution::Normal);
  CHECK_FALSE(parse_distribution("cauchy"));
  CHECK(std::string(to_string(Distribution::Normal)) == "normal");
}

TEST_CASE("coefficient draws", "[probability]") {
  Stream rng(3);
  VectorXd a, b;
  double sum = 0, sq = 0;
  const int reps = 20000;
  for (int i = 0; i < reps; ++i) {
    draw_coefficients(rng, Distribution::Uniform, 2, a, b);
    CHECK(a.cwiseAbs().maxCoeff() <= 1.0);
    CHECK(b.cwiseAbs().maxCoeff() <= 1.0);
    draw_coefficients(rng, Distribution::Normal, 1, a, b);
    sum += a(0);
    sq += a(0) * a(0);
  }
  CHECK(std::abs(sum / reps) < 0.05);
  CHECK_THAT(sq / reps, WithinAbs(1.0, 0.05));
}
