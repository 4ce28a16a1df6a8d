// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "simplexpow/conic_core.hpp"

namespace simplexpow {

struct SolverSettings {
  double tol_gap = 1e-8;
  double tol_feas = 1e-9;
  int max_outer = 200;
  int max_newton = 2000;
  double barrier_growth = 10.0;
  double step_fraction = 0.98;

  void validate() const {
    if (!(tol_gap > 0 && tol_feas > 0)) throw Error("solver tolerances must be positive");
    if (!(barrier_growth > 1.0)) throw Error("barrier_growth must exceed 1");
    if (!(step_fraction > 0.0 && step_fraction < 1.0)) throw Error("step_fraction must lie in (0,1)");
    if (max_outer < 1 || max_newton < 1) throw Error("iteration limits must be positive");
  }
};

enum class SolveStatus { Optimal, Infeasible, NumericalLimit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NumericalLimit: return "numerical_limit";
  }
  return "unknown";
}

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalLimit;
  VectorXd x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double certified_gap = std::numeric_limits<double>::infinity();
  int iterations = 0;    // outer (barrier parameter) updates
  int newton_steps = 0;
  double wall_time = 0.0;
  bool used_phase1 = false;
};

struct FeasibilityResult {
  bool feasible = false;
  double slack = std::numeric_limits<double>::infinity();
};

namespace detail {

// Affine parametrization x = x0 + Z u of {x : A x = b}, with Z restricted to
// each cone block over the columns it actually touches.
struct Elimination {
  struct Block {
    ConeSpec cone;
    std::size_t offset = 0;
    std::vector<std::size_t> cols;
    MatrixXd z;   // dim x cols.size()
    VectorXd x0;  // dim
  };

  bool consistent = true;
  double inconsistency = 0.0;
  std::size_t num_vars = 0;
  VectorXd x0;
  MatrixXd z;  // num_vars x free_vars.size()
  std::vector<std::size_t> free_vars;
  std::vector<Block> blocks;  // non-Free cones only
  double nu = 0.0;

  std::size_t dim() const { return free_vars.size(); }

  VectorXd point(const VectorXd& u) const { return x0 + z * u; }

  VectorXd block_point(const Block& b, const VectorXd& u) const {
    VectorXd xb = b.x0;
    for (std::size_t k = 0; k < b.cols.size(); ++k) xb += b.z.col(k) * u(b.cols[k]);
    return xb;
  }

  VectorXd block_dir(const Block& b, const VectorXd& du) const {
    VectorXd d = VectorXd::Zero(b.z.rows());
    for (std::size_t k = 0; k < b.cols.size(); ++k) d += b.z.col(k) * du(b.cols[k]);
    return d;
  }
};

// Gauss-Jordan on [A|b], visiting columns from the last variable to the first
// so that copies and slacks (created late) are expressed through the
// structural variables (created early).
inline Elimination eliminate(const ConicProgram& prog, double consistency_tol) {
  const std::size_t m = prog.num_rows(), n = prog.num_vars;
  MatrixXd mat = MatrixXd::Zero(m, n + 1);
  for (const auto& t : prog.equalities) mat(t.row, t.col) += t.value;
  for (std::size_t r = 0; r < m; ++r) mat(r, n) = prog.rhs(r);

  const double scale = std::max(1.0, m ? mat.leftCols(n).cwiseAbs().maxCoeff() : 1.0);
  const double piv_tol = 1e-10 * scale;
  std::vector<bool> used(m, false);
  std::vector<long> pivot_row(n, -1);

  for (std::size_t c = n; c-- > 0;) {
    long best = -1;
    double best_abs = piv_tol;
    for (std::size_t r = 0; r < m; ++r) {
      if (used[r]) continue;
      const double a = std::abs(mat(r, c));
      if (a > best_abs) {
        best_abs = a;
        best = static_cast<long>(r);
      }
    }
    if (best < 0) continue;
    used[best] = true;
    pivot_row[c] = best;
    mat.row(best) /= mat(best, c);
    for (std::size_t r = 0; r < m; ++r) {
      if (static_cast<long>(r) == best) continue;
      const double f = mat(r, c);
      if (f == 0.0) continue;
      mat.row(r) -= f * mat.row(best);
      mat(r, c) = 0.0;
      for (std::size_t k = 0; k <= n; ++k)
        if (std::abs(mat(r, k)) < 1e-14 * scale) mat(r, k) = 0.0;
    }
  }

  Elimination e;
  e.num_vars = n;
  for (std::size_t r = 0; r < m; ++r)
    if (!used[r]) e.inconsistency = std::max(e.inconsistency, std::abs(mat(r, n)));
  e.consistent = e.inconsistency <= consistency_tol * std::max(1.0, prog.rhs.size() ? prog.rhs.cwiseAbs().maxCoeff() : 1.0);

  for (std::size_t c = 0; c < n; ++c)
    if (pivot_row[c] < 0) e.free_vars.push_back(c);
  const std::size_t d = e.free_vars.size();
  e.x0 = VectorXd::Zero(n);
  e.z = MatrixXd::Zero(n, d);
  for (std::size_t k = 0; k < d; ++k) e.z(e.free_vars[k], k) = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    if (pivot_row[c] < 0) continue;
    const auto r = static_cast<std::size_t>(pivot_row[c]);
    e.x0(c) = mat(r, n);
    for (std::size_t k = 0; k < d; ++k) e.z(c, k) = -mat(r, e.free_vars[k]);
  }

  for (const auto& cb : prog.cones) {
    if (cb.cone.kind == ConeKind::Free) continue;
    Elimination::Block b;
    b.cone = cb.cone;
    b.offset = cb.offset;
    const std::size_t dim = cb.dim();
    for (std::size_t k = 0; k < d; ++k) {
      bool touched = false;
      for (std::size_t i = 0; i < dim && !touched; ++i) touched = e.z(cb.offset + i, k) != 0.0;
      if (touched) b.cols.push_back(k);
    }
    b.z.resize(dim, b.cols.size());
    for (std::size_t k = 0; k < b.cols.size(); ++k) b.z.col(k) = e.z.block(cb.offset, b.cols[k], dim, 1);
    b.x0 = e.x0.segment(cb.offset, dim);
    e.blocks.push_back(std::move(b));
    e.nu += cb.cone.barrier_parameter();
  }
  return e;
}

inline bool block_interior(const ConeSpec& cone, const VectorXd& x) {
  return cone_interior(cone, std::span<const double>(x.data(), x.size()));
}

// Largest alpha with x + alpha d interior (infinity when unbounded).
inline double max_step(const ConeSpec& cone, const VectorXd& x, const VectorXd& d, double cap) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (cone.kind) {
    case ConeKind::Free: return inf;
    case ConeKind::NonNeg: {
      double a = inf;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (d(i) < 0) a = std::min(a, -x(i) / d(i));
      return a;
    }
    case ConeKind::Psd: {
      const MatrixXd xm = smat(x), dm = smat(d);
      Eigen::LLT<MatrixXd> llt(xm);
      const MatrixXd l = llt.matrixL();
      MatrixXd w = l.triangularView<Eigen::Lower>().solve(dm);
      w = l.triangularView<Eigen::Lower>().solve(w.transpose()).eval();
      const MatrixXd sym = 0.5 * (w + w.transpose());
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym, Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues()(0);
      return lmin >= 0 ? inf : -1.0 / lmin;
    }
    case ConeKind::Power: {
      auto inside = [&](double a) { return block_interior(cone, x + a * d); };
      if (inside(cap)) return cap;
      double lo = 0.0, hi = cap;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
      }
      return lo;
    }
  }
  return inf;
}

struct CoreOutcome {
  SolveStatus status = SolveStatus::NumericalLimit;
  VectorXd u;
  double gap = std::numeric_limits<double>::infinity();
  int outer = 0;
  int newton = 0;
};

class BarrierCore {
 public:
  BarrierCore(const Elimination& e, const VectorXd& c, const SolverSettings& s)
      : e_(e), s_(s), ct_(e.z.transpose() * c) {}

  // Runs the barrier path from the interior point u0. early_stop is checked
  // after every centering and ends the run with status Optimal.
  CoreOutcome run(VectorXd u, const std::function<bool(const VectorXd&)>& early_stop = {}) const {
    CoreOutcome out;
    const std::size_t d = e_.dim();
    out.u = u;
    if (d == 0 || ct_.norm() <= 1e-300) {
      out.status = SolveStatus::Optimal;
      out.gap = 0.0;
      return out;
    }
    const double nu = std::max(e_.nu, 1.0);
    double t = initial_t(u);
    double best_gap = std::numeric_limits<double>::infinity();
    VectorXd best_u = u;
    // last centered point, restored when a barrier increase fails to recenter
    VectorXd centered_u = u;
    double centered_t = 0.0;
    double growth = s_.barrier_growth;
    int retries = 0;

    for (int outer = 0; outer < s_.max_outer; ++outer) {
      out.outer = outer + 1;
      double lambda = std::numeric_limits<double>::infinity();
      double prev_lambda = lambda;
      int stall = 0;
      for (int inner = 0; inner < 500; ++inner) {
        if (out.newton >= s_.max_newton) break;
        VectorXd du;
        if (!newton_direction(u, t, du, lambda)) break;
        if (lambda <= 1e-7) break;
        // roundoff floor: stop refining once progress stalls at small decrement
        if (lambda < 1e-3 && lambda > 0.5 * prev_lambda && ++stall >= 3) break;
        prev_lambda = lambda;
        const double alpha = step_length(u, du, t, lambda);
        ++out.newton;
        if (!(alpha > 0)) break;
        u += alpha * du;
      }
      if (!std::isfinite(lambda)) {
        VectorXd du;
        if (!newton_direction(u, t, du, lambda)) lambda = std::numeric_limits<double>::infinity();
      }
      const double beta = lambda;
      double gap = std::numeric_limits<double>::infinity();
      if (beta < 0.9) gap = (nu + (beta + std::sqrt(nu)) * beta / (1.0 - beta)) / t;
      if (gap < best_gap) {
        best_gap = gap;
        best_u = u;
      }
      if (early_stop && beta < 0.9 && early_stop(u)) {
        out.status = SolveStatus::Optimal;
        out.u = u;
        out.gap = gap;
        return out;
      }
      if (gap <= s_.tol_gap) {
        out.status = SolveStatus::Optimal;
        out.u = u;
        out.gap = gap;
        return out;
      }
      if (out.newton >= s_.max_newton) break;
      if (beta >= 0.9) {
        if (centered_t == 0.0 || ++retries > 6) break;
        growth = std::sqrt(growth);
        u = centered_u;
        t = centered_t * growth;
        continue;
      }
      centered_u = u;
      centered_t = t;
      const double t_next = t * growth;
      if (growth == s_.barrier_growth) predict(u, t, t_next);
      t = t_next;
    }
    out.status = SolveStatus::NumericalLimit;
    out.u = best_u;
    out.gap = best_gap;
    return out;
  }

 private:
  const Elimination& e_;
  const SolverSettings& s_;
  VectorXd ct_;

  // Gradient and Hessian of the barrier sum in u coordinates.
  bool barrier_system(const VectorXd& u, VectorXd& g, MatrixXd& k) const {
    const std::size_t d = e_.dim();
    g = VectorXd::Zero(d);
    k = MatrixXd::Zero(d, d);
    VectorXd gb;
    MatrixXd hb;
    for (const auto& b : e_.blocks) {
      if (b.cols.empty()) continue;
      const VectorXd xb = e_.block_point(b, u);
      if (!detail::barrier_derivatives(b.cone, std::span<const double>(xb.data(), xb.size()), gb, hb))
        return false;
      const VectorXd gl = b.z.transpose() * gb;
      const MatrixXd kl = b.z.transpose() * hb * b.z;
      for (std::size_t i = 0; i < b.cols.size(); ++i) {
        g(b.cols[i]) += gl(i);
        for (std::size_t j = 0; j < b.cols.size(); ++j) k(b.cols[i], b.cols[j]) += kl(i, j);
      }
    }
    return true;
  }

  static bool solve_spd(const MatrixXd& k, const VectorXd& rhs, VectorXd& sol) {
    const Eigen::Index d = k.rows();
    VectorXd dscale(d);
    for (Eigen::Index i = 0; i < d; ++i) dscale(i) = k(i, i) > 0 ? 1.0 / std::sqrt(k(i, i)) : 1.0;
    MatrixXd ks = dscale.asDiagonal() * k * dscale.asDiagonal();
    const VectorXd rs = dscale.cwiseProduct(rhs);
    double reg = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::LLT<MatrixXd> llt(ks + reg * MatrixXd::Identity(d, d));
      if (llt.info() == Eigen::Success) {
        sol = dscale.cwiseProduct(llt.solve(rs));
        if (sol.allFinite()) return true;
      }
      reg = reg == 0.0 ? 1e-14 : reg * 100.0;
    }
    // roundoff in the assembly can leave small negative eigenvalues at condition
    // numbers near 1e20; clip them to a relative floor
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(ks);
    if (es.info() != Eigen::Success) return false;
    const VectorXd ev = es.eigenvalues();
    const double floor = std::max(ev.maxCoeff(), 1.0) * 1e-15;
    const VectorXd inv = ev.unaryExpr([floor](double e) { return 1.0 / std::max(e, floor); });
    sol = dscale.cwiseProduct(es.eigenvectors() * inv.cwiseProduct(es.eigenvectors().transpose() * rs));
    return sol.allFinite();
  }

  bool newton_direction(const VectorXd& u, double t, VectorXd& du, double& lambda) const {
    VectorXd g;
    MatrixXd k;
    if (!barrier_system(u, g, k)) return false;
    const VectorXd grad = t * ct_ + g;
    if (!solve_spd(k, -grad, du)) return false;
    const double l2 = -grad.dot(du);
    lambda = std::sqrt(std::max(l2, 0.0));
    return std::isfinite(lambda);
  }

  double initial_t(const VectorXd& u) const {
    VectorXd g;
    MatrixXd k;
    if (!barrier_system(u, g, k)) return 1.0;
    VectorXd kc, kg;
    if (!solve_spd(k, ct_, kc) || !solve_spd(k, g, kg)) return 1.0;
    const double den = ct_.dot(kc);
    const double t = den > 0 ? -ct_.dot(kg) / den : 1.0;
    if (!std::isfinite(t) || t <= 0) return 1.0;
    return std::clamp(t, 1e-3, 1e3);
  }

  // Barrier-sum change along du, summed blockwise to limit cancellation.
  std::optional<double> delta_f(const VectorXd& u, const VectorXd& du, double alpha, double t) const {
    double delta = alpha * t * ct_.dot(du);
    for (const auto& b : e_.blocks) {
      if (b.cols.empty()) continue;
      const VectorXd xb = e_.block_point(b, u);
      const VectorXd xn = xb + alpha * e_.block_dir(b, du);
      auto f0 = detail::barrier_value(b.cone, std::span<const double>(xb.data(), xb.size()));
      auto f1 = detail::barrier_value(b.cone, std::span<const double>(xn.data(), xn.size()));
      if (!f0 || !f1) return std::nullopt;
      delta += *f1 - *f0;
    }
    return delta;
  }

  // Tangent step along the central path from the center at t towards t_next,
  // kept only when it lowers the barrier objective at t_next.
  void predict(VectorXd& u, double t, double t_next) const {
    VectorXd g;
    MatrixXd k;
    VectorXd v;
    if (!barrier_system(u, g, k) || !solve_spd(k, -ct_, v)) return;
    const VectorXd du = (t_next - t) * v;
    double amax = std::numeric_limits<double>::infinity();
    for (const auto& b : e_.blocks) {
      if (b.cols.empty()) continue;
      amax = std::min(amax, max_step(b.cone, e_.block_point(b, u), e_.block_dir(b, du), 1.0 / s_.step_fraction));
    }
    double alpha = std::min(1.0, 0.5 * amax);
    for (int it = 0; it < 8 && alpha > 1e-4; ++it, alpha *= 0.5) {
      auto df = delta_f(u, du, alpha, t_next);
      if (df && *df < 0 && usable(u + alpha * du)) {
        u += alpha * du;
        return;
      }
    }
  }

  double step_length(const VectorXd& u, const VectorXd& du, double t, double lambda) const {
    const double cap = 1.0 / s_.step_fraction;
    double amax = std::numeric_limits<double>::infinity();
    for (const auto& b : e_.blocks) {
      if (b.cols.empty()) continue;
      const VectorXd xb = e_.block_point(b, u);
      const VectorXd db = e_.block_dir(b, du);
      amax = std::min(amax, max_step(b.cone, xb, db, cap));
    }
    double alpha = std::min(1.0, s_.step_fraction * amax);
    const double slope = -lambda * lambda;
    for (int it = 0; it < 60; ++it) {
      if (lambda < 0.2) {
        if (usable(u + alpha * du)) return alpha;
      } else {
        auto df = delta_f(u, du, alpha, t);
        if (df && *df <= 0.25 * alpha * slope && usable(u + alpha * du)) return alpha;
      }
      alpha *= 0.5;
    }
    return 0.0;
  }

  // Barrier derivatives evaluate at u. Stricter than the step bound near the
  // boundary, where roundoff can make a factorization fail.
  bool usable(const VectorXd& u) const {
    VectorXd gb;
    MatrixXd hb;
    for (const auto& b : e_.blocks) {
      if (b.cols.empty()) continue;
      const VectorXd xb = e_.block_point(b, u);
      if (!detail::barrier_derivatives(b.cone, std::span<const double>(xb.data(), xb.size()), gb, hb)) return false;
    }
    return true;
  }
};

inline VectorXd phase1_direction(const ConeSpec& cone) {
  VectorXd ebar = VectorXd::Zero(cone.dim());
  switch (cone.kind) {
    case ConeKind::NonNeg: ebar.setOnes(); break;
    case ConeKind::Power: ebar(0) = ebar(1) = 1.0; break;
    case ConeKind::Psd:
      for (std::size_t i = 0; i < cone.size; ++i) ebar(svec_index(i, i)) = 1.0;
      break;
    default: break;
  }
  return ebar;
}

// Auxiliary program: variables (z, s, r) with A z - (A ebar) s = b, r - s = 1,
// z in the original cones, r >= 0, minimizing s. Any z with s < 0 recovers
// an interior x = z - s ebar.
struct Phase1 {
  ConicProgram prog;
  VectorXd ebar;
  std::size_t s_index = 0;
};

inline Phase1 make_phase1(const ConicProgram& prog, const VectorXd& particular) {
  Phase1 p;
  const std::size_t n = prog.num_vars;
  p.ebar = VectorXd::Zero(n);
  for (const auto& c : prog.cones) p.ebar.segment(c.offset, c.dim()) = phase1_direction(c.cone);

  ConicProgram& q = p.prog;
  q.num_vars = n + 2;
  p.s_index = n;
  q.objective = VectorXd::Zero(n + 2);
  q.objective(n) = 1.0;
  q.equalities = prog.equalities;
  const std::size_t m = prog.num_rows();
  VectorXd aebar = VectorXd::Zero(m);
  for (const auto& t : prog.equalities) aebar(t.row) += t.value * p.ebar(t.col);
  for (std::size_t r = 0; r < m; ++r)
    if (aebar(r) != 0.0) q.equalities.push_back({r, n, -aebar(r)});
  q.equalities.push_back({m, n + 1, 1.0});
  q.equalities.push_back({m, n, -1.0});
  q.rhs.resize(m + 1);
  q.rhs.head(m) = prog.rhs;
  q.rhs(m) = 1.0;
  q.cones = prog.cones;
  for (auto& c : q.cones) c.kernel_hint.clear();
  q.cones.push_back({ConeSpec::free(1), n, {}});
  q.cones.push_back({ConeSpec::nonneg(1), n + 1, {}});

  double s0 = 1.0;
  for (const auto& c : prog.cones)
    if (c.cone.kind != ConeKind::Free)
      s0 = std::max(s0, 1.0 + particular.segment(c.offset, c.dim()).lpNorm<1>());
  VectorXd start(n + 2);
  for (int attempt = 0; attempt < 60; ++attempt) {
    start.head(n) = particular + s0 * p.ebar;
    bool ok = true;
    for (const auto& c : prog.cones)
      ok = ok && cone_interior(c.cone, std::span<const double>(start.data() + c.offset, c.dim()));
    if (ok) break;
    s0 *= 2.0;
  }
  start(n) = s0;
  start(n + 1) = 1.0 + s0;
  q.start = start;
  return p;
}

inline std::optional<VectorXd> interior_from_start(const Elimination& e, const ConicProgram& prog,
                                                   const VectorXd& start) {
  VectorXd u(e.dim());
  for (std::size_t k = 0; k < e.dim(); ++k) u(k) = start(e.free_vars[k]);
  const VectorXd x = e.point(u);
  for (const auto& c : prog.cones)
    if (!cone_interior(c.cone, std::span<const double>(x.data() + c.offset, c.dim())))
      return std::nullopt;
  return u;
}

inline bool all_interior(const ConicProgram& prog, const VectorXd& x) {
  for (const auto& c : prog.cones)
    if (!cone_interior(c.cone, std::span<const double>(x.data() + c.offset, c.dim()))) return false;
  return true;
}

// Finds a strictly interior point of prog via the auxiliary program.
inline std::optional<VectorXd> phase1_point(const ConicProgram& prog, const Elimination& e,
                                            const SolverSettings& s) {
  const Phase1 p = make_phase1(prog, e.x0);
  const Elimination pe = eliminate(p.prog, s.tol_feas);
  if (!pe.consistent) return std::nullopt;
  auto u0 = interior_from_start(pe, p.prog, *p.prog.start);
  if (!u0) return std::nullopt;
  auto s_of = [&](const VectorXd& u) {
    return pe.x0(p.s_index) + pe.z.row(p.s_index).dot(u);
  };
  SolverSettings ps = s;
  ps.tol_gap = std::min(s.tol_gap, 1e-10);
  BarrierCore core(pe, p.prog.objective, ps);
  const CoreOutcome r = core.run(*u0, [&](const VectorXd& u) { return s_of(u) < 0.0; });
  const VectorXd full = pe.point(r.u);
  const double sv = full(p.s_index);
  if (!(sv < 0.0)) return std::nullopt;
  VectorXd x = full.head(prog.num_vars) - sv * p.ebar;
  if (!all_interior(prog, x)) return std::nullopt;
  return x;
}

}  // namespace detail

/// A program whose equality elimination and interior start are computed once,
/// so that repeated solves can swap only the objective.
class PreparedProgram {
 public:
  explicit PreparedProgram(ConicProgram prog, SolverSettings settings = {})
      : prog_(std::move(prog)), settings_(settings) {
    prog_.validate();
    settings_.validate();
    elim_ = detail::eliminate(prog_, settings_.tol_feas);
    if (!elim_.consistent) return;
    if (prog_.start) start_u_ = detail::interior_from_start(elim_, prog_, *prog_.start);
    if (!start_u_) {
      auto x = detail::phase1_point(prog_, elim_, settings_);
      if (x) {
        start_u_ = detail::interior_from_start(elim_, prog_, *x);
        used_phase1_ = start_u_.has_value();
      }
    }
  }

  const ConicProgram& program() const { return prog_; }
  const SolverSettings& settings() const { return settings_; }
  bool has_interior_start() const { return start_u_.has_value(); }
  std::size_t reduced_dim() const { return elim_.dim(); }

  SolveResult solve() const { return solve(prog_.objective); }

  SolveResult solve(const VectorXd& objective) const {
    const auto t0 = std::chrono::steady_clock::now();
    if (static_cast<std::size_t>(objective.size()) != prog_.num_vars)
      throw Error("objective length differs from num_vars");
    SolveResult res;
    res.used_phase1 = used_phase1_;
    if (!start_u_) {
      res.status = SolveStatus::Infeasible;
    } else {
      detail::BarrierCore core(elim_, objective, settings_);
      const detail::CoreOutcome out = core.run(*start_u_);
      res.x = elim_.point(out.u);
      res.objective = objective.dot(res.x);
      res.certified_gap = out.gap;
      res.iterations = out.outer;
      res.newton_steps = out.newton;
      res.status = out.status;
      if (res.status == SolveStatus::Optimal &&
          program_residuals(prog_, res.x).equality_residual > settings_.tol_feas)
        res.status = SolveStatus::NumericalLimit;
    }
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }

 private:
  ConicProgram prog_;
  SolverSettings settings_;
  detail::Elimination elim_;
  std::optional<VectorXd> start_u_;
  bool used_phase1_ = false;
};

/// Barrier-path interior-point solve with certified objective gap.
inline SolveResult solve(const ConicProgram& prog, const SolverSettings& settings = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  PreparedProgram prepared(prog, settings);
  SolveResult r = prepared.solve();
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Smallest uniform shift s such that the program's cones, each moved by s
/// along its central direction, meet the equalities with the fixed values.
/// feasible iff s <= tol. Inconsistent equalities give (false, residual).
inline FeasibilityResult feasibility_distance(const ConicProgram& prog,
                                              const std::vector<std::pair<std::size_t, double>>& fixed,
                                              double tol, const SolverSettings& settings = {}) {
  prog.validate();
  settings.validate();
  if (tol < 0) throw Error("tolerance must be nonnegative");
  ConicProgram q = prog;
  q.start.reset();
  const std::size_t m = q.num_rows();
  q.rhs.conservativeResize(m + fixed.size());
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (fixed[i].first >= q.num_vars) throw Error("fixed variable index out of range");
    q.equalities.push_back({m + i, fixed[i].first, 1.0});
    q.rhs(m + i) = fixed[i].second;
  }
  const double cons_tol = std::max(settings.tol_feas, tol);
  const detail::Elimination e = detail::eliminate(q, cons_tol);
  if (!e.consistent) return {false, e.inconsistency};
  const detail::Phase1 p = detail::make_phase1(q, e.x0);
  const detail::Elimination pe = detail::eliminate(p.prog, cons_tol);
  if (!pe.consistent) return {false, pe.inconsistency};
  auto u0 = detail::interior_from_start(pe, p.prog, *p.prog.start);
  if (!u0) return {false, std::numeric_limits<double>::infinity()};
  SolverSettings ps = settings;
  ps.tol_gap = std::min(settings.tol_gap, 1e-9);
  detail::BarrierCore core(pe, p.prog.objective, ps);
  // the shift never needs to go below -1; stop early once clearly interior
  const auto out = core.run(*u0, [&](const VectorXd& u) {
    return pe.x0(p.s_index) + pe.z.row(p.s_index).dot(u) < -std::max(tol, 1e-6);
  });
  const double s = pe.point(out.u)(p.s_index);
  return {s <= tol, s};
}

}  // namespace simplexpow
