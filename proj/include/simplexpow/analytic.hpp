// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "simplexpow/conic_core.hpp"
#include "simplexpow/relaxations.hpp"

namespace simplexpow {

// ---------------------------------------------------------------------------
// Exactness classification of the P relaxation on the simplex

enum class ExactCase { Case1, Case2, Case3a, Case3b, Inexact };

inline const char* to_string(ExactCase c) {
  switch (c) {
    case ExactCase::Case1: return "case1";
    case ExactCase::Case2: return "case2";
    case ExactCase::Case3a: return "case3a";
    case ExactCase::Case3b: return "case3b";
    case ExactCase::Inexact: return "inexact";
  }
  return "?";
}

struct ExactnessAnalysis {
  ExactCase exact_case = ExactCase::Case1;
  std::vector<std::size_t> J_plus, J_minus, J_hat;
  double mu = std::numeric_limits<double>::quiet_NaN();
  double sigma = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::size_t> j_prime;

  bool exact() const { return exact_case != ExactCase::Inexact; }
};

namespace detail {

/// r^(1/(kappa-1)) for r >= 0, evaluated in log space.
inline double root_power(double r, double kappa) {
  if (r <= 0) return 0.0;
  return std::exp(std::log(r) / (kappa - 1.0));
}

inline void check_coefficients(const VectorXd& alpha, const VectorXd& beta, double kappa) {
  if (alpha.size() != beta.size() || alpha.size() == 0) throw Error("alpha and beta must be nonempty and equal length");
  if (!(kappa > 1.0)) throw Error("kappa must exceed 1");
}

}  // namespace detail

inline ExactnessAnalysis classify_exactness(const VectorXd& alpha, const VectorXd& beta, double kappa) {
  detail::check_coefficients(alpha, beta, kappa);
  ExactnessAnalysis a;
  const auto n = static_cast<std::size_t>(alpha.size());
  for (std::size_t j = 0; j < n; ++j) (beta(j) > 0 ? a.J_plus : a.J_minus).push_back(j);
  if (a.J_minus.empty()) {
    a.exact_case = ExactCase::Case1;
    return a;
  }
  std::size_t jp = a.J_minus.front();
  for (std::size_t j : a.J_minus)
    if (alpha(j) + beta(j) < alpha(jp) + beta(jp)) jp = j;
  a.j_prime = jp;
  a.mu = alpha(jp) + beta(jp);
  if (a.J_plus.empty()) {
    a.exact_case = ExactCase::Case2;
    return a;
  }
  a.sigma = 0.0;
  for (std::size_t j : a.J_plus) {
    if (alpha(j) - a.mu < 0) {
      a.J_hat.push_back(j);
      a.sigma += detail::root_power((a.mu - alpha(j)) / (kappa * beta(j)), kappa);
    }
  }
  if (a.J_hat.empty())
    a.exact_case = ExactCase::Case3a;
  else
    a.exact_case = a.sigma >= 1.0 ? ExactCase::Case3b : ExactCase::Inexact;
  return a;
}

// ---------------------------------------------------------------------------
// Water filling

struct WaterFillResult {
  double lambda = 0.0;
  VectorXd x;  // indexed like idx
  double value = 0.0;
};

/// min sum_j alpha_j x_j + beta_j x_j^kappa over {x >= 0, sum x = s}, j in idx.
/// Safeguarded Newton on the multiplier with a bisection fallback.
inline WaterFillResult water_fill(const VectorXd& alpha, const VectorXd& beta, const std::vector<std::size_t>& idx,
                                  double kappa, double s) {
  if (idx.empty()) throw Error("water_fill needs at least one index");
  if (!(s > 0) || !std::isfinite(s)) throw Error("water_fill budget must be positive");
  for (std::size_t j : idx)
    if (!(beta(j) > 0)) throw Error("water_fill requires positive beta on the index set");
  const std::size_t m = idx.size();
  WaterFillResult r;
  r.x = VectorXd::Zero(static_cast<Eigen::Index>(m));
  if (m == 1) {
    const std::size_t j = idx[0];
    r.x(0) = s;
    r.lambda = alpha(j) + kappa * beta(j) * std::pow(s, kappa - 1.0);
    r.value = alpha(j) * s + beta(j) * std::pow(s, kappa);
    return r;
  }
  const double q = 1.0 / (kappa - 1.0);
  auto mass = [&](double lam, double* deriv) {
    double total = 0.0, d = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t j = idx[k];
      const double r0 = (lam - alpha(j)) / (kappa * beta(j));
      if (r0 <= 0) continue;
      const double xj = detail::root_power(r0, kappa);
      total += xj;
      d += q * xj / (lam - alpha(j));
    }
    if (deriv) *deriv = d;
    return total;
  };
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t j : idx) {
    lo = std::min(lo, alpha(j));
    hi = std::max(hi, alpha(j) + kappa * beta(j) * std::pow(s, kappa - 1.0) * static_cast<double>(m));
  }
  double lam = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double d = 0.0;
    const double f = mass(lam, &d) - s;
    if (std::abs(f) <= 1e-12 * std::max(1.0, s)) break;
    if (f > 0)
      hi = lam;
    else
      lo = lam;
    double next = d > 0 ? lam - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == lam || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lam))) break;
    lam = next;
  }
  r.lambda = lam;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = idx[k];
    r.x(static_cast<Eigen::Index>(k)) = detail::root_power((lam - alpha(j)) / (kappa * beta(j)), kappa);
  }
  const double total = r.x.sum();
  if (total > 0) r.x *= s / total;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = idx[k];
    const double xj = r.x(static_cast<Eigen::Index>(k));
    r.value += alpha(j) * xj + beta(j) * std::pow(xj, kappa);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Closed-form P optimum

struct PClosedForm {
  double value = 0.0;
  VectorXd x, y;
  ExactnessAnalysis analysis;
};

inline PClosedForm solve_p_closed_form(const VectorXd& alpha, const VectorXd& beta, double kappa) {
  PClosedForm out;
  out.analysis = classify_exactness(alpha, beta, kappa);
  const auto& a = out.analysis;
  const auto n = alpha.size();
  out.x = VectorXd::Zero(n);
  switch (a.exact_case) {
    case ExactCase::Case1: {
      const auto wf = water_fill(alpha, beta, a.J_plus, kappa, 1.0);
      for (std::size_t k = 0; k < a.J_plus.size(); ++k) out.x(a.J_plus[k]) = wf.x(k);
      out.value = wf.value;
      break;
    }
    case ExactCase::Case2:
    case ExactCase::Case3a:
      out.x(*a.j_prime) = 1.0;
      out.value = a.mu;
      break;
    case ExactCase::Case3b: {
      VectorXd shifted = alpha.array() - a.mu;
      const auto wf = water_fill(shifted, beta, a.J_hat, kappa, 1.0);
      for (std::size_t k = 0; k < a.J_hat.size(); ++k) out.x(a.J_hat[k]) = wf.x(k);
      out.value = a.mu + wf.value;
      break;
    }
    case ExactCase::Inexact: {
      double value = a.mu;
      for (std::size_t j : a.J_hat) {
        const double r = (a.mu - alpha(j)) / (kappa * beta(j));
        out.x(j) = detail::root_power(r, kappa);
        value += (1.0 - kappa) * beta(j) * std::pow(out.x(j), kappa);
      }
      out.x(*a.j_prime) = 1.0 - a.sigma;
      out.value = value;
      break;
    }
  }
  out.y = VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) out.y(j) = beta(j) > 0 ? std::pow(out.x(j), kappa) : out.x(j);
  return out;
}

inline PClosedForm solve_p_closed_form(const Instance& inst) {
  inst.validate();
  if (inst.ground.type != GroundType::Simplex) throw Error("closed-form P optimum requires the simplex ground");
  return solve_p_closed_form(inst.alpha, inst.beta, inst.kappa);
}

// ---------------------------------------------------------------------------
// Bounds

/// max over [0,1] of x - x^kappa.
inline double max_power_gap(double kappa) {
  return std::pow(kappa, 1.0 / (1.0 - kappa)) - std::pow(kappa, kappa / (1.0 - kappa));
}

inline double p_gap_upper_bound(const VectorXd& alpha, const VectorXd& beta, double kappa) {
  const auto a = classify_exactness(alpha, beta, kappa);
  if (!a.j_prime) return 0.0;
  return -beta(*a.j_prime) * max_power_gap(kappa);
}

inline double distance_upper_bound(std::size_t n, double kappa) {
  if (n < 2) throw Error("distance bounds need n >= 2");
  if (!(kappa > 1.0)) throw Error("kappa must exceed 1");
  return 1.0 - std::pow(static_cast<double>(n), 1.0 - kappa);
}

struct DistanceWitness {
  VectorXd x, y;
  double value = 0.0;
};

/// The barycenter e/n is the average of the vertex pairs (e^j, e^j), so it lies in conv(S^kappa).
inline DistanceWitness distance_lb_witness(std::size_t n, double kappa) {
  DistanceWitness w;
  w.value = distance_upper_bound(n, kappa);
  w.x = VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
  w.y = w.x;
  return w;
}

// ---------------------------------------------------------------------------
// Convex combination for n = 2, kappa = 2

template <class Scalar>
struct ConvexTerm {
  std::array<Scalar, 2> x, y;
  Scalar coefficient;
};

template <class Scalar>
struct ConvexCombination {
  Scalar weight;
  std::vector<ConvexTerm<Scalar>> points;
};

/// Writes a point of the n = 2 PR set as a combination of at most two points of S^2.
template <class Scalar>
ConvexCombination<Scalar> decompose_n2(const std::array<Scalar, 2>& x, const std::array<Scalar, 2>& y,
                                       const Scalar& tol = Scalar(0)) {
  const Scalar zero(0), one(1);
  auto abs_s = [](const Scalar& v) { return v < Scalar(0) ? Scalar(-v) : v; };
  for (int j = 0; j < 2; ++j) {
    if (x[j] < -tol || y[j] > x[j] + tol || y[j] < x[j] * x[j] - tol)
      throw Error("point is not in the P set");
  }
  if (abs_s(x[0] + x[1] - one) > tol) throw Error("point is not on the simplex");
  if (abs_s((x[0] - y[0]) - (x[1] - y[1])) > tol) throw Error("point is not in the PR set");
  ConvexCombination<Scalar> c;
  if (y[0] == zero) {
    c.weight = one;
    c.points.push_back({x, y, one});
    return c;
  }
  const Scalar lam = x[0] * x[0] / y[0];
  std::array<Scalar, 2> xt = {y[0] / x[0], (x[0] - y[0]) / x[0]};
  std::array<Scalar, 2> yt = {xt[0] * xt[0], xt[1] * xt[1]};
  c.weight = lam;
  c.points.push_back({xt, yt, lam});
  if (lam != one) c.points.push_back({{zero, one}, {zero, one}, Scalar(one - lam)});
  return c;
}

}  // namespace simplexpow
