// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "simplexpow/analytic.hpp"
#include "simplexpow/rng.hpp"

namespace simplexpow {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Exact probability of Case 3a under Unif(-1,1) coefficients

namespace detail {

inline Rational rpow(const Rational& b, unsigned e) {
  Rational r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

inline Rational pow2(int e) {
  BigInt one = 1;
  return e >= 0 ? Rational(one << e) : Rational(BigInt(1), one << (-e));
}

inline BigInt binomial(unsigned n, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

/// I_1..I_{n-1} from the closed form and the integration-by-parts recursion, exactly.
inline std::vector<Rational> i_m_exact(std::size_t n) {
  if (n < 2) throw Error("I_m needs n >= 2");
  const Rational quarter(1, 4), three_q(3, 4);
  std::vector<Rational> out;
  const auto nn = static_cast<unsigned>(n);
  out.push_back(Rational(-2) * (detail::rpow(quarter, nn) - detail::rpow(three_q, nn)) / Rational(nn));
  for (unsigned m = 2; m < nn; ++m) {
    const unsigned e = nn - m + 1;
    const Rational head =
        Rational(-2) * (detail::rpow(quarter, e) - detail::pow2(static_cast<int>(m) - 1) * detail::rpow(three_q, e)) /
        Rational(e);
    out.push_back(head - Rational(2 * (m - 1), e) * out.back());
  }
  return out;
}

inline double i_m(std::size_t n, std::size_t m) {
  if (n < 2 || m < 1 || m >= n) throw Error("I_m needs 1 <= m <= n - 1");
  return static_cast<double>(i_m_exact(n)[m - 1]);
}

struct ExactCaseProbability {
  Rational p_case3a, lower_bound;
  std::vector<Rational> I;
};

inline ExactCaseProbability prob_case3a_exact(std::size_t n) {
  ExactCaseProbability r;
  r.I = i_m_exact(n);
  const auto nn = static_cast<int>(n);
  Rational sum = 0;
  for (int m = 1; m < nn; ++m) {
    const Rational tail = detail::pow2(2 * (m - nn)) / Rational(2 * nn - m);
    const Rational cond = Rational(1) - Rational(m) * detail::pow2(-m) * (r.I[m - 1] + tail);
    sum += Rational(detail::binomial(static_cast<unsigned>(nn), static_cast<unsigned>(m))) * cond;
  }
  r.p_case3a = sum * detail::pow2(-nn);
  r.lower_bound = Rational(1) - detail::pow2(1 - nn) - detail::rpow(Rational(7, 8), static_cast<unsigned>(nn)) -
                  detail::rpow(Rational(3, 8), static_cast<unsigned>(nn));
  return r;
}

struct CaseProbability {
  std::size_t n = 0;
  double p_case3a = 0.0;
  double lower_bound = 0.0;
  std::vector<double> I;
  bool bound_holds = false;  // decided in exact arithmetic
};

inline CaseProbability prob_case3a(std::size_t n) {
  const auto e = prob_case3a_exact(n);
  CaseProbability r;
  r.n = n;
  r.p_case3a = static_cast<double>(e.p_case3a);
  r.lower_bound = static_cast<double>(e.lower_bound);
  for (const auto& v : e.I) r.I.push_back(static_cast<double>(v));
  r.bound_holds = e.p_case3a >= e.lower_bound;
  return r;
}

// ---------------------------------------------------------------------------
// Monte Carlo estimate of P exactness

enum class Distribution { Uniform, Normal };

inline const char* to_string(Distribution d) { return d == Distribution::Uniform ? "uniform" : "normal"; }

inline std::optional<Distribution> parse_distribution(std::string_view s) {
  if (s == "uniform") return Distribution::Uniform;
  if (s == "normal") return Distribution::Normal;
  return std::nullopt;
}

/// Draws alpha then beta, each entry iid from the distribution.
inline void draw_coefficients(Stream& rng, Distribution d, std::size_t n, VectorXd& alpha, VectorXd& beta) {
  alpha.resize(static_cast<Eigen::Index>(n));
  beta.resize(static_cast<Eigen::Index>(n));
  auto draw = [&] { return d == Distribution::Uniform ? rng.uniform(-1.0, 1.0) : rng.normal(); };
  for (auto& v : alpha) v = draw();
  for (auto& v : beta) v = draw();
}

struct SimulationEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::map<ExactCase, std::size_t> per_case_counts;
};

/// Sample i uses the stream keyed by (seed, dist, kappa, n, i), so the estimate
/// does not depend on how samples are split across workers.
inline SimulationEstimate simulate_exactness(Distribution dist, double kappa, std::size_t n, std::size_t samples,
                                             std::uint64_t seed, unsigned jobs = 1) {
  if (samples < 1) throw Error("need at least one sample");
  if (!(kappa > 1.0)) throw Error("kappa must exceed 1");
  if (n < 1) throw Error("n must be positive");
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(samples)));
  std::vector<std::array<std::size_t, 5>> counts(jobs, std::array<std::size_t, 5>{});
  auto work = [&](unsigned shard) {
    VectorXd a, b;
    for (std::size_t i = shard; i < samples; i += jobs) {
      Stream rng(derive_key({seed, static_cast<std::uint64_t>(dist), double_bits(kappa), n, i}));
      draw_coefficients(rng, dist, n, a, b);
      ++counts[shard][static_cast<std::size_t>(classify_exactness(a, b, kappa).exact_case)];
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned s = 0; s < jobs; ++s) pool.emplace_back(work, s);
    for (auto& t : pool) t.join();
  }
  SimulationEstimate est;
  est.samples = samples;
  est.seed = seed;
  std::size_t exact = 0;
  for (int c = 0; c < 5; ++c) {
    std::size_t total = 0;
    for (const auto& s : counts) total += s[c];
    est.per_case_counts[static_cast<ExactCase>(c)] = total;
    if (static_cast<ExactCase>(c) != ExactCase::Inexact) exact += total;
  }
  est.p_hat = static_cast<double>(exact) / static_cast<double>(samples);
  est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(samples));
  return est;
}

}  // namespace simplexpow
