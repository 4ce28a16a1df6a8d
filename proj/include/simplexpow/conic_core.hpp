// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace simplexpow {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Base error for invalid arguments and malformed programs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ConeKind { Free, NonNeg, Power, Psd };

/// A single cone. Power cones are always three dimensional; a Psd(k) cone
/// holds the k(k+1)/2 scaled upper-triangular entries of a symmetric matrix.
struct ConeSpec {
  ConeKind kind = ConeKind::Free;
  std::size_t size = 0;  // dim for Free/NonNeg, side length for Psd
  double gamma = 0.5;    // Power only

  static ConeSpec free(std::size_t dim) { return {ConeKind::Free, dim, 0.0}; }
  static ConeSpec nonneg(std::size_t dim) { return {ConeKind::NonNeg, dim, 0.0}; }
  static ConeSpec power(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
      throw Error("power cone exponent must lie in (0,1)");
    return {ConeKind::Power, 3, gamma};
  }
  static ConeSpec psd(std::size_t side) {
    if (side < 1) throw Error("psd cone side length must be >= 1");
    return {ConeKind::Psd, side, 0.0};
  }

  std::size_t dim() const {
    switch (kind) {
      case ConeKind::Power: return 3;
      case ConeKind::Psd: return size * (size + 1) / 2;
      default: return size;
    }
  }

  /// Barrier parameter of the standard barrier (0 for Free).
  double barrier_parameter() const {
    switch (kind) {
      case ConeKind::NonNeg: return static_cast<double>(size);
      case ConeKind::Power: return 3.0;
      case ConeKind::Psd: return static_cast<double>(size);
      default: return 0.0;
    }
  }

  bool operator==(const ConeSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Scaled symmetric vectorization. Entry (i,j), i <= j, sits at j(j+1)/2 + i;
// off-diagonals carry a factor sqrt(2) so that svec(A).svec(B) = <A,B>_F.

inline std::size_t svec_index(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return j * (j + 1) / 2 + i;
}

inline std::size_t svec_side(std::size_t dim) {
  auto k = static_cast<std::size_t>(std::llround((std::sqrt(8.0 * dim + 1.0) - 1.0) / 2.0));
  if (k * (k + 1) / 2 != dim) throw Error("not a triangular svec length");
  return k;
}

inline VectorXd svec(const MatrixXd& m) {
  const auto k = static_cast<std::size_t>(m.rows());
  VectorXd v(k * (k + 1) / 2);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      const double s = 0.5 * (m(i, j) + m(j, i));
      v(svec_index(i, j)) = (i == j) ? s : std::sqrt(2.0) * s;
    }
  return v;
}

inline MatrixXd smat(std::span<const double> v) {
  const std::size_t k = svec_side(v.size());
  MatrixXd m(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      const double e = v[svec_index(i, j)];
      m(i, j) = m(j, i) = (i == j) ? e : e / std::sqrt(2.0);
    }
  return m;
}

inline MatrixXd smat(const VectorXd& v) { return smat(std::span<const double>(v.data(), v.size())); }

/// Coefficient that multiplies matrix entry (i,j) in its svec slot.
inline double svec_scale(std::size_t i, std::size_t j) { return i == j ? 1.0 : std::sqrt(2.0); }

// ---------------------------------------------------------------------------

namespace detail {

inline void check_dim(const ConeSpec& cone, std::size_t n) {
  if (n != cone.dim()) throw Error("point dimension does not match cone dimension");
}

inline double min_eigenvalue(const MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double power_product(double x1, double x2, double gamma) {
  x1 = std::max(x1, 0.0);
  x2 = std::max(x2, 0.0);
  if (x1 == 0.0 || x2 == 0.0) return 0.0;
  return std::exp(gamma * std::log(x1) + (1.0 - gamma) * std::log(x2));
}

}  // namespace detail

/// Membership within an absolute tolerance.
inline bool cone_contains(const ConeSpec& cone, std::span<const double> p, double tol) {
  detail::check_dim(cone, p.size());
  if (tol < 0) throw Error("tolerance must be nonnegative");
  switch (cone.kind) {
    case ConeKind::Free: return true;
    case ConeKind::NonNeg:
      return std::all_of(p.begin(), p.end(), [tol](double v) { return v >= -tol; });
    case ConeKind::Power:
      if (p[0] < -tol || p[1] < -tol) return false;
      return detail::power_product(p[0], p[1], cone.gamma) >= std::abs(p[2]) - tol;
    case ConeKind::Psd: {
      // exact zero-tolerance checks need a little slack for eigenvalue roundoff
      return detail::min_eigenvalue(smat(p)) >= -tol;
    }
  }
  return false;
}

inline bool cone_contains(const ConeSpec& cone, const VectorXd& p, double tol) {
  return cone_contains(cone, std::span<const double>(p.data(), p.size()), tol);
}

/// Signed distance-like violation: 0 inside, positive outside.
inline double cone_violation(const ConeSpec& cone, std::span<const double> p) {
  detail::check_dim(cone, p.size());
  switch (cone.kind) {
    case ConeKind::Free: return 0.0;
    case ConeKind::NonNeg: {
      double v = 0.0;
      for (double e : p) v = std::max(v, -e);
      return v;
    }
    case ConeKind::Power: {
      double v = std::max({0.0, -p[0], -p[1]});
      return std::max(v, std::abs(p[2]) - detail::power_product(p[0], p[1], cone.gamma));
    }
    case ConeKind::Psd: return std::max(0.0, -detail::min_eigenvalue(smat(p)));
  }
  return 0.0;
}

/// Strict interiority (the barrier domain).
inline bool cone_interior(const ConeSpec& cone, std::span<const double> p) {
  switch (cone.kind) {
    case ConeKind::Free: return true;
    case ConeKind::NonNeg:
      return std::all_of(p.begin(), p.end(), [](double v) { return v > 0.0; });
    case ConeKind::Power: {
      if (!(p[0] > 0.0 && p[1] > 0.0)) return false;
      const double g = cone.gamma;
      const double prod = std::exp(2.0 * g * std::log(p[0]) + 2.0 * (1.0 - g) * std::log(p[1]));
      return prod - p[2] * p[2] > 0.0;
    }
    case ConeKind::Psd: {
      Eigen::LLT<MatrixXd> llt(smat(p));
      return llt.info() == Eigen::Success;
    }
  }
  return false;
}

struct BarrierEval {
  double value = 0.0;
  VectorXd gradient;
  MatrixXd hessian;
};

namespace detail {

// Barrier value only; nullopt outside the interior.
inline std::optional<double> barrier_value(const ConeSpec& cone, std::span<const double> p) {
  switch (cone.kind) {
    case ConeKind::Free: return 0.0;
    case ConeKind::NonNeg: {
      double v = 0.0;
      for (double e : p) {
        if (!(e > 0.0)) return std::nullopt;
        v -= std::log(e);
      }
      return v;
    }
    case ConeKind::Power: {
      const double x1 = p[0], x2 = p[1], x3 = p[2], g = cone.gamma;
      if (!(x1 > 0.0 && x2 > 0.0)) return std::nullopt;
      const double l1 = std::log(x1), l2 = std::log(x2);
      const double prod = std::exp(2.0 * g * l1 + 2.0 * (1.0 - g) * l2);
      const double psi = prod - x3 * x3;
      if (!(psi > 0.0)) return std::nullopt;
      return -std::log(psi) - (1.0 - g) * l1 - g * l2;
    }
    case ConeKind::Psd: {
      Eigen::LLT<MatrixXd> llt(smat(p));
      if (llt.info() != Eigen::Success) return std::nullopt;
      const auto& l = llt.matrixLLT();
      double v = 0.0;
      for (Eigen::Index i = 0; i < l.rows(); ++i) {
        if (!(l(i, i) > 0.0)) return std::nullopt;
        v -= 2.0 * std::log(l(i, i));
      }
      return v;
    }
  }
  return std::nullopt;
}

// Gradient and Hessian on the interior. Returns false outside.
inline bool barrier_derivatives(const ConeSpec& cone, std::span<const double> p, VectorXd& g,
                                MatrixXd& h) {
  const std::size_t n = p.size();
  g.resize(n);
  h.setZero(n, n);
  switch (cone.kind) {
    case ConeKind::Free: g.setZero(); return true;
    case ConeKind::NonNeg:
      for (std::size_t i = 0; i < n; ++i) {
        if (!(p[i] > 0.0)) return false;
        g(i) = -1.0 / p[i];
        h(i, i) = 1.0 / (p[i] * p[i]);
      }
      return true;
    case ConeKind::Power: {
      const double x1 = p[0], x2 = p[1], x3 = p[2], gm = cone.gamma;
      if (!(x1 > 0.0 && x2 > 0.0)) return false;
      const double a = 2.0 * gm, b = 2.0 - 2.0 * gm;
      const double prod = std::exp(a * std::log(x1) + b * std::log(x2));
      const double psi = prod - x3 * x3;
      if (!(psi > 0.0)) return false;
      Eigen::Vector3d dpsi(a * prod / x1, b * prod / x2, -2.0 * x3);
      Eigen::Matrix3d d2psi = Eigen::Matrix3d::Zero();
      d2psi(0, 0) = a * (a - 1.0) * prod / (x1 * x1);
      d2psi(1, 1) = b * (b - 1.0) * prod / (x2 * x2);
      d2psi(0, 1) = d2psi(1, 0) = a * b * prod / (x1 * x2);
      d2psi(2, 2) = -2.0;
      g = -dpsi / psi;
      g(0) -= (1.0 - gm) / x1;
      g(1) -= gm / x2;
      h = dpsi * dpsi.transpose() / (psi * psi) - d2psi / psi;
      h(0, 0) += (1.0 - gm) / (x1 * x1);
      h(1, 1) += gm / (x2 * x2);
      return true;
    }
    case ConeKind::Psd: {
      const MatrixXd x = smat(p);
      Eigen::LLT<MatrixXd> llt(x);
      if (llt.info() != Eigen::Success) return false;
      const MatrixXd s = llt.solve(MatrixXd::Identity(x.rows(), x.cols()));
      g = -svec(s);
      const auto k = static_cast<std::size_t>(x.rows());
      // H_pq = tr(S E_p S E_q) with E_(ab) = c_ab (e_a e_b^T + e_b e_a^T)
      for (std::size_t bq = 0; bq < k; ++bq)
        for (std::size_t aq = 0; aq <= bq; ++aq) {
          const std::size_t q = svec_index(aq, bq);
          const double cq = aq == bq ? 0.5 : 1.0 / std::sqrt(2.0);
          for (std::size_t bp = 0; bp < k; ++bp)
            for (std::size_t ap = 0; ap <= bp; ++ap) {
              const std::size_t pidx = svec_index(ap, bp);
              if (pidx > q) continue;
              const double cp = ap == bp ? 0.5 : 1.0 / std::sqrt(2.0);
              const double v =
                  2.0 * cp * cq * (s(ap, aq) * s(bp, bq) + s(ap, bq) * s(bp, aq));
              h(pidx, q) = h(q, pidx) = v;
            }
        }
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Standard self-concordant barrier with exact gradient and Hessian.
/// Throws when the point is not strictly interior.
inline BarrierEval barrier_eval(const ConeSpec& cone, std::span<const double> p) {
  detail::check_dim(cone, p.size());
  auto v = detail::barrier_value(cone, p);
  BarrierEval out;
  if (!v || !detail::barrier_derivatives(cone, p, out.gradient, out.hessian))
    throw Error("barrier evaluated outside the cone interior");
  out.value = *v;
  return out;
}

inline BarrierEval barrier_eval(const ConeSpec& cone, const VectorXd& p) {
  return barrier_eval(cone, std::span<const double>(p.data(), p.size()));
}

// ---------------------------------------------------------------------------

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// One cone membership over the contiguous slice [offset, offset + cone.dim()).
/// A nonempty kernel_hint v records that the equalities force M v = 0 for the
/// matrix of a Psd block, which is what facial reduction consumes.
struct ConeBlock {
  ConeSpec cone;
  std::size_t offset = 0;
  std::vector<double> kernel_hint;

  std::size_t dim() const { return cone.dim(); }
};

/// min c^T x  s.t.  A x = b,  x in K_1 x ... x K_p.
struct ConicProgram {
  std::size_t num_vars = 0;
  VectorXd objective;
  std::vector<Triplet> equalities;
  VectorXd rhs;
  std::vector<ConeBlock> cones;
  std::vector<std::string> var_names;
  std::optional<VectorXd> start;  // optional interior start hint

  std::size_t num_rows() const { return static_cast<std::size_t>(rhs.size()); }

  double barrier_parameter() const {
    double nu = 0.0;
    for (const auto& c : cones) nu += c.cone.barrier_parameter();
    return nu;
  }

  MatrixXd dense_equalities() const {
    MatrixXd a = MatrixXd::Zero(static_cast<Eigen::Index>(num_rows()),
                                static_cast<Eigen::Index>(num_vars));
    for (const auto& t : equalities) a(t.row, t.col) += t.value;
    return a;
  }

  /// Throws when slices do not tile [0, num_vars) or A is malformed.
  void validate() const {
    if (static_cast<std::size_t>(objective.size()) != num_vars)
      throw Error("objective length differs from num_vars");
    std::size_t next = 0;
    for (const auto& c : cones) {
      if (c.offset != next) throw Error("cone slices must be contiguous and disjoint");
      next += c.dim();
      if (!c.kernel_hint.empty() &&
          (c.cone.kind != ConeKind::Psd || c.kernel_hint.size() != c.cone.size))
        throw Error("kernel hint must match a psd block side length");
    }
    if (next != num_vars) throw Error("cone slices must cover every variable");
    for (const auto& t : equalities)
      if (t.row >= num_rows() || t.col >= num_vars) throw Error("equality triplet out of range");
    if (!var_names.empty() && var_names.size() != num_vars)
      throw Error("var_names length differs from num_vars");
    if (start && static_cast<std::size_t>(start->size()) != num_vars)
      throw Error("start length differs from num_vars");
  }
};

struct PointResiduals {
  double equality_residual = 0.0;
  double cone_violation = 0.0;
};

inline PointResiduals program_residuals(const ConicProgram& prog, const VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != prog.num_vars)
    throw Error("point length differs from num_vars");
  VectorXd r = -prog.rhs;
  for (const auto& t : prog.equalities) r(t.row) += t.value * x(t.col);
  PointResiduals out;
  out.equality_residual = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  for (const auto& c : prog.cones)
    out.cone_violation = std::max(
        out.cone_violation, cone_violation(c.cone, std::span<const double>(x.data() + c.offset, c.dim())));
  return out;
}

}  // namespace simplexpow
