// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "simplexpow/analytic.hpp"
#include "simplexpow/relaxations.hpp"
#include "simplexpow/rng.hpp"

namespace simplexpow {

// ---------------------------------------------------------------------------
// Global minimum over S^kappa on the simplex

struct OracleSettings {
  int grid = 4096;
  double t_tol = 1e-10;
  int refine = 8;  // best grid minima refined per support choice
};

struct GlobalSolution {
  double value = std::numeric_limits<double>::infinity();
  VectorXd x;
  std::optional<std::size_t> support_choice;  // index in J- carrying mass t
  double t = 0.0;
};

namespace detail {

/// phi(s): optimal convex-block value with budget s over J+.
class ConvexBlock {
 public:
  ConvexBlock(const VectorXd& alpha, const VectorXd& beta, const std::vector<std::size_t>& idx, double kappa)
      : alpha_(alpha), beta_(beta), idx_(idx), kappa_(kappa) {}

  bool empty() const { return idx_.empty(); }

  double value(double s) const {
    if (s <= 0) return 0.0;
    return water_fill(alpha_, beta_, idx_, kappa_, s).value;
  }

  void fill(double s, VectorXd& x) const {
    if (s <= 0 || idx_.empty()) return;
    const auto wf = water_fill(alpha_, beta_, idx_, kappa_, s);
    for (std::size_t k = 0; k < idx_.size(); ++k) x(idx_[k]) = wf.x(k);
  }

 private:
  const VectorXd& alpha_;
  const VectorXd& beta_;
  const std::vector<std::size_t>& idx_;
  double kappa_;
};

/// Minimizes psi on [0,1] by a dense grid plus golden-section refinement of the best brackets.
template <class F>
std::pair<double, double> minimize_1d(F&& psi, const OracleSettings& s) {
  const int g = std::max(s.grid, 2);
  std::vector<double> v(static_cast<std::size_t>(g) + 1);
  for (int i = 0; i <= g; ++i) v[i] = psi(static_cast<double>(i) / g);
  double best_t = 0.0, best_v = v[0];
  for (int i = 0; i <= g; ++i)
    if (v[i] < best_v) best_v = v[i], best_t = static_cast<double>(i) / g;
  std::vector<int> minima;
  for (int i = 1; i < g; ++i)
    if (v[i] <= v[i - 1] && v[i] <= v[i + 1]) minima.push_back(i);
  std::sort(minima.begin(), minima.end(), [&](int a, int b) { return v[a] < v[b] || (v[a] == v[b] && a < b); });
  if (static_cast<int>(minima.size()) > s.refine) minima.resize(static_cast<std::size_t>(s.refine));
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i : minima) {
    double a = static_cast<double>(i - 1) / g, b = static_cast<double>(i + 1) / g;
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double fc = psi(c), fd = psi(d);
    while (b - a > s.t_tol) {
      if (fc <= fd) {
        b = d, d = c, fd = fc;
        c = b - ratio * (b - a);
        fc = psi(c);
      } else {
        a = c, c = d, fc = fd;
        d = a + ratio * (b - a);
        fd = psi(d);
      }
    }
    const double t = 0.5 * (a + b), ft = psi(t);
    for (auto [tt, ff] : {std::pair{t, ft}, std::pair{c, fc}, std::pair{d, fd}})
      if (ff < best_v) best_v = ff, best_t = tt;
  }
  return {best_t, best_v};
}

}  // namespace detail

/// Separable structure: convex terms (beta > 0) are water-filled, and the concave
/// block attains its minimum at a vertex of each slice, so one J- index carries
/// all of its mass t. Each choice leaves a one-dimensional problem in t.
inline GlobalSolution solve_global_simplex(const Instance& inst, const OracleSettings& settings = {}) {
  inst.validate();
  if (inst.ground.type != GroundType::Simplex) throw Error("the global oracle requires the simplex ground");
  const auto& al = inst.alpha;
  const auto& be = inst.beta;
  const double k = inst.kappa;
  std::vector<std::size_t> plus, minus;
  for (std::size_t j = 0; j < inst.n; ++j) (be(j) > 0 ? plus : minus).push_back(j);
  const detail::ConvexBlock phi(al, be, plus, k);

  GlobalSolution best;
  if (!plus.empty()) {
    best.value = phi.value(1.0);
    best.t = 0.0;
  }
  for (std::size_t j : minus) {
    auto psi = [&](double t) { return al(j) * t + be(j) * std::pow(t, k) + phi.value(1.0 - t); };
    double t = 1.0, v = al(j) + be(j);
    if (!phi.empty()) std::tie(t, v) = detail::minimize_1d(psi, settings);
    if (v < best.value) {
      best.value = v;
      best.t = t;
      best.support_choice = j;
    }
  }
  best.x = VectorXd::Zero(static_cast<Eigen::Index>(inst.n));
  if (best.support_choice) best.x(*best.support_choice) = best.t;
  phi.fill(1.0 - best.t, best.x);
  // report the value of the returned point itself
  best.value = 0.0;
  for (std::size_t j = 0; j < inst.n; ++j) best.value += al(j) * best.x(j) + be(j) * std::pow(best.x(j), k);
  return best;
}

// ---------------------------------------------------------------------------
// L1 distance to S^kappa

struct DistanceSettings {
  int starts = 32;
  int iterations = 400;
  std::uint64_t seed = 0x5eed;
};

namespace detail {

inline double l1_objective(const VectorXd& x, const VectorXd& xh, const VectorXd& yh, double kappa) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    f += std::abs(x(i) - xh(i)) + std::abs(std::pow(x(i), kappa) - yh(i));
  return f;
}

/// Euclidean projection onto the simplex.
inline VectorXd project_simplex(const VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  return (v.array() - theta).max(0.0);
}

}  // namespace detail

/// Best L1 distance found from multi-start projected subgradient descent plus
/// pairwise mass-transfer polish. An upper estimate of the true distance.
inline double l1_distance_to_s(const VectorXd& xh, const VectorXd& yh, double kappa, const DistanceSettings& s = {}) {
  const auto n = xh.size();
  if (yh.size() != n || n == 0) throw Error("point dimension mismatch");
  std::vector<VectorXd> starts;
  starts.push_back(detail::project_simplex(xh));
  for (Eigen::Index j = 0; j < n && static_cast<int>(starts.size()) < s.starts; ++j)
    starts.push_back(VectorXd::Unit(n, j));
  Stream rng(derive_key({s.seed, static_cast<std::uint64_t>(n), double_bits(kappa)}));
  while (static_cast<int>(starts.size()) < s.starts) {
    VectorXd r(n);
    for (auto& e : r) e = -std::log(1.0 - rng.uniform01());
    starts.push_back(r / r.sum());
  }
  auto f = [&](const VectorXd& x) { return detail::l1_objective(x, xh, yh, kappa); };
  double best = std::numeric_limits<double>::infinity();
  VectorXd best_x;
  for (const auto& x0 : starts) {
    VectorXd x = x0, xb = x0;
    double fb = f(x);
    for (int it = 1; it <= s.iterations; ++it) {
      VectorXd g(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = std::max(x(i), 0.0);
        g(i) = (xi > xh(i) ? 1.0 : xi < xh(i) ? -1.0 : 0.0) +
               (std::pow(xi, kappa) > yh(i) ? 1.0 : std::pow(xi, kappa) < yh(i) ? -1.0 : 0.0) * kappa *
                   std::pow(xi, kappa - 1.0);
      }
      g.array() -= g.mean();
      const double gn = g.norm();
      if (gn == 0) break;
      x = detail::project_simplex(x - (0.2 / std::sqrt(static_cast<double>(it))) * g / gn);
      const double fx = f(x);
      if (fx < fb) fb = fx, xb = x;
    }
    if (fb < best) best = fb, best_x = xb;
  }
  // pairwise polish: move mass between two coordinates on shrinking grids
  for (double h = 0.05; h > 1e-9; h *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          if (i == j) continue;
          const double d = std::min(h, best_x(j));
          if (d <= 0) continue;
          VectorXd x = best_x;
          x(i) += d;
          x(j) -= d;
          const double fx = f(x);
          if (fx < best - 1e-15) best = fx, best_x = x, improved = true;
        }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// SUBSET-SUM reduction

/// Instance of min sum x_j - x_j^kappa over {x in [0,1]^n : a^T x = b}; its optimum is 0
/// exactly when some subset of a sums to b.
inline Instance reduce_subset_sum(const std::vector<std::int64_t>& a, std::int64_t b, double kappa) {
  if (a.empty()) throw Error("subset-sum needs at least one item");
  for (auto v : a)
    if (v <= 0) throw Error("subset-sum entries must be positive");
  if (b <= 0) throw Error("subset-sum target must be positive");
  const auto n = static_cast<Eigen::Index>(a.size());
  MatrixXd A(1, n);
  for (Eigen::Index j = 0; j < n; ++j) A(0, j) = static_cast<double>(a[static_cast<std::size_t>(j)]);
  Instance inst;
  inst.n = a.size();
  inst.kappa = kappa;
  inst.alpha = VectorXd::Ones(n);
  inst.beta = -VectorXd::Ones(n);
  inst.ground = GroundSet::polytope(A, VectorXd::Constant(1, static_cast<double>(b)), MatrixXd(0, n), VectorXd(0));
  inst.validate();
  return inst;
}

inline bool subset_sum_feasible(const std::vector<std::int64_t>& a, std::int64_t b) {
  if (b < 0) return false;
  std::vector<char> reach(static_cast<std::size_t>(b) + 1, 0);
  reach[0] = 1;
  for (auto v : a) {
    if (v <= 0) throw Error("subset-sum entries must be positive");
    for (std::int64_t s = b; s >= v; --s)
      if (reach[static_cast<std::size_t>(s - v)]) reach[static_cast<std::size_t>(s)] = 1;
  }
  return reach[static_cast<std::size_t>(b)];
}

/// Enumerates the binary points of [0,1]^n. The objective is zero exactly on
/// binary points and positive elsewhere, so (Q) has optimum 0 iff a feasible one exists.
inline bool q_optimum_is_zero(const Instance& inst) {
  if (inst.ground.type != GroundType::Polytope) throw Error("expected a reduced subset-sum instance");
  if (inst.n > 24) throw Error("exhaustive enumeration limited to n <= 24");
  const auto n = static_cast<Eigen::Index>(inst.n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.n); ++mask) {
    VectorXd x(n);
    for (Eigen::Index j = 0; j < n; ++j) x(j) = (mask >> j) & 1 ? 1.0 : 0.0;
    if (ground_contains(inst, x, 0.0)) return true;
  }
  return false;
}

}  // namespace simplexpow
