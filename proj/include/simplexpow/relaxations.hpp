// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "simplexpow/conic_core.hpp"
#include "simplexpow/ipm_solver.hpp"

namespace simplexpow {

// ---------------------------------------------------------------------------
// Instances

enum class GroundType { Simplex, Polytope };

/// Either the standard simplex or {x in [0,1]^n : A x = b, C x <= d}.
struct GroundSet {
  GroundType type = GroundType::Simplex;
  MatrixXd A, C;
  VectorXd b, d;

  static GroundSet simplex() { return {}; }
  static GroundSet polytope(MatrixXd a, VectorXd bv, MatrixXd c, VectorXd dv) {
    GroundSet g;
    g.type = GroundType::Polytope;
    g.A = std::move(a);
    g.b = std::move(bv);
    g.C = std::move(c);
    g.d = std::move(dv);
    return g;
  }
};

struct Instance {
  std::size_t n = 0;
  double kappa = 2.0;
  VectorXd alpha, beta;
  GroundSet ground;

  void validate() const {
    if (n < 1) throw Error("instance dimension must be positive");
    if (!(kappa > 1.0 && kappa <= 8.0)) throw Error("kappa must lie in (1, 8]");
    if (static_cast<std::size_t>(alpha.size()) != n || static_cast<std::size_t>(beta.size()) != n)
      throw Error("alpha and beta must have length n");
    if (!alpha.allFinite() || !beta.allFinite()) throw Error("alpha and beta must be finite");
    if (ground.type == GroundType::Polytope) {
      const auto& g = ground;
      if ((g.A.size() && static_cast<std::size_t>(g.A.cols()) != n) ||
          (g.C.size() && static_cast<std::size_t>(g.C.cols()) != n))
        throw Error("polytope matrices must have n columns");
      if (g.A.rows() != g.b.size() || g.C.rows() != g.d.size())
        throw Error("polytope right-hand sides must match row counts");
    }
  }

  static Instance simplex(double kappa, VectorXd alpha, VectorXd beta) {
    Instance inst;
    inst.n = static_cast<std::size_t>(alpha.size());
    inst.kappa = kappa;
    inst.alpha = std::move(alpha);
    inst.beta = std::move(beta);
    return inst;
  }
};

enum class RelaxationKind { P, PR, PRs, PRs3, PRS, PRV, PRsV, PRs3V, PRSV };

inline constexpr std::array<RelaxationKind, 9> kAllKinds = {
    RelaxationKind::P,   RelaxationKind::PR,   RelaxationKind::PRs,   RelaxationKind::PRs3, RelaxationKind::PRS,
    RelaxationKind::PRV, RelaxationKind::PRsV, RelaxationKind::PRs3V, RelaxationKind::PRSV};

inline const char* to_string(RelaxationKind k) {
  switch (k) {
    case RelaxationKind::P: return "P";
    case RelaxationKind::PR: return "PR";
    case RelaxationKind::PRs: return "PRs";
    case RelaxationKind::PRs3: return "PRs3";
    case RelaxationKind::PRS: return "PRS";
    case RelaxationKind::PRV: return "PRV";
    case RelaxationKind::PRsV: return "PRsV";
    case RelaxationKind::PRs3V: return "PRs3V";
    case RelaxationKind::PRSV: return "PRSV";
  }
  return "?";
}

inline std::optional<RelaxationKind> parse_kind(std::string_view s) {
  for (auto k : kAllKinds)
    if (s == to_string(k)) return k;
  return std::nullopt;
}

struct KindTraits {
  bool lifted = false;  // uses X
  bool soc = false;     // 2x2 minors
  bool s3 = false;      // 3x3 principal blocks through the last row
  bool sdp = false;     // full block
  bool rpt = false;     // w rows
};

inline KindTraits traits(RelaxationKind k) {
  using K = RelaxationKind;
  KindTraits t;
  t.lifted = k != K::P;
  t.soc = k == K::PRs || k == K::PRsV;
  t.s3 = k == K::PRs3 || k == K::PRs3V;
  t.sdp = k == K::PRS || k == K::PRSV;
  t.rpt = k == K::PRV || k == K::PRsV || k == K::PRs3V || k == K::PRSV;
  return t;
}

/// The relaxation with V rows removed (identity for non-V kinds).
inline RelaxationKind base_kind(RelaxationKind k) {
  using K = RelaxationKind;
  switch (k) {
    case K::PRV: return K::PR;
    case K::PRsV: return K::PRs;
    case K::PRs3V: return K::PRs3;
    case K::PRSV: return K::PRS;
    default: return k;
  }
}

// ---------------------------------------------------------------------------
// Program builder

struct LinExpr {
  std::vector<std::pair<std::size_t, double>> terms;
  double constant = 0.0;

  LinExpr() = default;
  static LinExpr var(std::size_t i, double c = 1.0) {
    LinExpr e;
    e.terms.push_back({i, c});
    return e;
  }
  static LinExpr konst(double c) {
    LinExpr e;
    e.constant = c;
    return e;
  }
  LinExpr& add(std::size_t i, double c) {
    if (c != 0.0) terms.push_back({i, c});
    return *this;
  }
  LinExpr& add(const LinExpr& o, double c = 1.0) {
    for (auto [i, v] : o.terms) add(i, c * v);
    constant += c * o.constant;
    return *this;
  }
};

/// Accumulates variables, cone blocks and rows. When a value is known for
/// every structural variable, every copy and slack gets its implied value too.
class ProgramBuilder {
 public:
  explicit ProgramBuilder(bool track_values) : track_(track_values) {}

  std::size_t add_block(const ConeSpec& cone, const std::vector<std::string>& names,
                        const std::vector<double>& values = {}) {
    const std::size_t off = names_.size();
    if (names.size() != cone.dim()) throw Error("block name count differs from cone dimension");
    cones_.push_back({cone, off, {}});
    for (std::size_t i = 0; i < names.size(); ++i) {
      names_.push_back(names[i]);
      values_.push_back(i < values.size() ? values[i] : 0.0);
    }
    if (track_ && values.size() != names.size()) track_ = false;
    return off;
  }

  /// New cone whose entries are fresh variables tied to the given expressions.
  std::size_t add_cone(const ConeSpec& cone, const std::vector<LinExpr>& entries, const std::string& tag,
                       std::vector<double> kernel_hint = {}) {
    if (entries.size() != cone.dim()) throw Error("cone entry count differs from cone dimension");
    std::vector<std::string> names;
    std::vector<double> vals;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      names.push_back(tag + "[" + std::to_string(i) + "]");
      vals.push_back(eval(entries[i]));
    }
    const bool keep = track_;
    const std::size_t off = add_block(cone, names, vals);
    track_ = keep;
    cones_.back().kernel_hint = std::move(kernel_hint);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      LinExpr row = entries[i];
      row.add(off + i, -1.0);
      add_row(row, 0.0);
    }
    return off;
  }

  /// Adds the row expr = rhs.
  void add_row(const LinExpr& expr, double rhs) {
    const std::size_t r = rhs_.size();
    for (auto [i, v] : expr.terms) rows_.push_back({r, i, v});
    rhs_.push_back(rhs - expr.constant);
  }

  double eval(const LinExpr& e) const {
    double v = e.constant;
    for (auto [i, c] : e.terms) v += c * values_[i];
    return v;
  }

  bool tracking() const { return track_; }

  ConicProgram finish(const std::vector<std::pair<std::size_t, double>>& objective) const {
    ConicProgram p;
    p.num_vars = names_.size();
    p.objective = VectorXd::Zero(p.num_vars);
    for (auto [i, c] : objective) p.objective(i) += c;
    p.equalities = rows_;
    p.rhs = Eigen::Map<const VectorXd>(rhs_.data(), rhs_.size());
    p.cones = cones_;
    p.var_names = names_;
    if (track_) p.start = Eigen::Map<const VectorXd>(values_.data(), values_.size());
    p.validate();
    return p;
  }

 private:
  bool track_;
  std::vector<std::string> names_;
  std::vector<double> values_;
  std::vector<ConeBlock> cones_;
  std::vector<Triplet> rows_;
  std::vector<double> rhs_;
};

// ---------------------------------------------------------------------------
// Facial reduction

namespace detail {

// Orthonormal basis of v-perp from a Householder reflection of v.
inline MatrixXd complement_basis(const VectorXd& v) {
  const Eigen::Index k = v.size();
  const MatrixXd vm = v;
  Eigen::HouseholderQR<MatrixXd> qr(vm);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(k, k);
  return q.rightCols(k - 1);
}

// svec(W Z W^T) = T svec(Z)
inline MatrixXd congruence_map(const MatrixXd& w) {
  const auto k = static_cast<std::size_t>(w.rows()), r = static_cast<std::size_t>(w.cols());
  const std::size_t dk = k * (k + 1) / 2, dr = r * (r + 1) / 2;
  MatrixXd t(dk, dr);
  for (std::size_t q = 0; q < dr; ++q) {
    VectorXd e = VectorXd::Zero(dr);
    e(q) = 1.0;
    t.col(q) = svec(w * smat(e) * w.transpose());
  }
  return t;
}

}  // namespace detail

/// Replaces every Psd(k) block that carries a kernel hint v by Psd(k-1)
/// through the substitution M = W Z W^T, with W spanning v-perp.
inline ConicProgram facial_reduce(const ConicProgram& prog) {
  prog.validate();
  ConicProgram cur = prog;
  for (;;) {
    std::size_t bi = cur.cones.size();
    for (std::size_t i = 0; i < cur.cones.size(); ++i)
      if (!cur.cones[i].kernel_hint.empty()) {
        bi = i;
        break;
      }
    if (bi == cur.cones.size()) return cur;

    const ConeBlock blk = cur.cones[bi];
    const std::size_t k = blk.cone.size;
    if (k < 2) throw Error("cannot reduce a 1x1 block");
    VectorXd v = Eigen::Map<const VectorXd>(blk.kernel_hint.data(), k);
    if (v.norm() == 0.0) throw Error("kernel hint must be nonzero");
    v.normalize();
    const MatrixXd w = detail::complement_basis(v);
    const MatrixXd t = detail::congruence_map(w);
    const std::size_t old_dim = blk.dim(), new_dim = (k - 1) * k / 2;
    const std::size_t off = blk.offset;
    const long shift = static_cast<long>(new_dim) - static_cast<long>(old_dim);
    auto remap = [&](std::size_t j) { return j < off ? j : static_cast<std::size_t>(static_cast<long>(j) + shift); };

    ConicProgram out;
    out.num_vars = cur.num_vars - old_dim + new_dim;
    out.rhs = cur.rhs;
    out.objective = VectorXd::Zero(out.num_vars);
    for (std::size_t j = 0; j < cur.num_vars; ++j) {
      if (j >= off && j < off + old_dim) {
        for (std::size_t q = 0; q < new_dim; ++q) out.objective(off + q) += cur.objective(j) * t(j - off, q);
      } else {
        out.objective(remap(j)) += cur.objective(j);
      }
    }
    for (const auto& tr : cur.equalities) {
      if (tr.col >= off && tr.col < off + old_dim) {
        for (std::size_t q = 0; q < new_dim; ++q) {
          const double c = tr.value * t(tr.col - off, q);
          if (c != 0.0) out.equalities.push_back({tr.row, off + q, c});
        }
      } else {
        out.equalities.push_back({tr.row, remap(tr.col), tr.value});
      }
    }
    for (std::size_t i = 0; i < cur.cones.size(); ++i) {
      ConeBlock c = cur.cones[i];
      if (i == bi) {
        c.cone = ConeSpec::psd(k - 1);
        c.kernel_hint.clear();
      } else if (c.offset > off) {
        c.offset = remap(c.offset);
      }
      out.cones.push_back(c);
    }
    if (!cur.var_names.empty()) {
      const std::string base = cur.var_names[off].substr(0, cur.var_names[off].find('['));
      for (std::size_t j = 0; j < off; ++j) out.var_names.push_back(cur.var_names[j]);
      for (std::size_t q = 0; q < new_dim; ++q) out.var_names.push_back(base + ".fr[" + std::to_string(q) + "]");
      for (std::size_t j = off + old_dim; j < cur.num_vars; ++j) out.var_names.push_back(cur.var_names[j]);
    }
    if (cur.start) {
      VectorXd s(out.num_vars);
      s.head(off) = cur.start->head(off);
      const MatrixXd m = smat(VectorXd(cur.start->segment(off, old_dim)));
      s.segment(off, new_dim) = svec(w.transpose() * m * w);
      s.tail(cur.num_vars - off - old_dim) = cur.start->tail(cur.num_vars - off - old_dim);
      out.start = s;
    }
    out.validate();
    cur = std::move(out);
  }
}

// ---------------------------------------------------------------------------
// Compilation

/// Values for the structural variables (x, y, X, w) of a relaxation.
struct StructuralPoint {
  VectorXd x, y;
  MatrixXd X;  // n x n symmetric, lifted kinds
  MatrixXd w;  // n x n, V kinds
};

struct CompiledRelaxation {
  ConicProgram program;
  RelaxationKind kind = RelaxationKind::P;
  std::vector<std::size_t> x_vars, y_vars;
  std::vector<std::size_t> X_vars;  // svec-ordered entries (i <= j)
  std::vector<std::size_t> w_vars;  // row-major n x n

  VectorXd extract_x(const VectorXd& v) const {
    VectorXd out(x_vars.size());
    for (std::size_t i = 0; i < x_vars.size(); ++i) out(i) = v(x_vars[i]);
    return out;
  }
  VectorXd extract_y(const VectorXd& v) const {
    VectorXd out(y_vars.size());
    for (std::size_t i = 0; i < y_vars.size(); ++i) out(i) = v(y_vars[i]);
    return out;
  }
  MatrixXd extract_X(const VectorXd& v) const {
    const std::size_t n = x_vars.size();
    MatrixXd out = MatrixXd::Zero(n, n);
    if (X_vars.empty()) return out;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i <= j; ++i) out(i, j) = out(j, i) = v(X_vars[svec_index(i, j)]);
    return out;
  }
};

namespace detail {

inline void check_ground(RelaxationKind kind, const Instance& inst) {
  inst.validate();
  if (inst.ground.type == GroundType::Polytope && kind != RelaxationKind::P && kind != RelaxationKind::PR)
    throw Error(std::string("relaxation ") + to_string(kind) + " requires the simplex ground set");
  if (kind != RelaxationKind::P && inst.n < 2) throw Error("lifted relaxations need n >= 2");
}

// Exponents (q, p) of the interior start y = x^q, X_jj = x^p at x = e/n.
inline std::pair<double, double> start_exponents(double kappa) {
  const double q = kappa == 2.0 ? 1.5 : 0.5 * (1.0 + kappa);
  if (kappa < 2.0) return {q, 0.5 * (q + 2.0 * q / kappa)};
  if (kappa == 2.0) return {1.5, 1.5};
  return {q, 0.5 * (std::max(2.0 * q / kappa, 1.0) + std::min(q, 2.0))};
}

// x = e/n, y = x^q, X = a ee^T + b I with Xe = x and X_jj = x^p.
inline StructuralPoint analytic_start(const Instance& inst, bool spread_offdiag = false) {
  const std::size_t n = inst.n;
  const double k = inst.kappa;
  const auto [q, p] = start_exponents(k);
  const double xv = 1.0 / static_cast<double>(n);
  StructuralPoint sp;
  sp.x = VectorXd::Constant(n, xv);
  sp.y = VectorXd::Constant(n, std::pow(xv, q));
  const double diag = std::pow(xv, p);
  double a = n > 1 ? (xv - diag) / static_cast<double>(n - 1) : 0.0;
  if (spread_offdiag) a = 0.5 * (a + diag);
  sp.X = MatrixXd::Constant(n, n, a);
  sp.X.diagonal().setConstant(diag);
  sp.w = MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sp.w(i, j) = std::pow(sp.X(i, j), k) / std::pow(sp.x(j), k - 1.0);
      s += sp.w(i, j);
    }
    const double pad = (sp.y(i) - s) / (2.0 * static_cast<double>(n));
    sp.w.row(i).array() += pad;
  }
  return sp;
}

struct CompileOptions {
  bool rlt = true;
  bool sdp_no_reduction = false;  // unreduced full block without RLT rows (internal check variant)
};

inline CompiledRelaxation compile(RelaxationKind kind, const Instance& inst, const StructuralPoint* sp,
                                  CompileOptions opt = {}) {
  check_ground(kind, inst);
  const std::size_t n = inst.n;
  const double k = inst.kappa;
  const KindTraits tr = traits(kind);
  const bool lifted = tr.lifted || opt.sdp_no_reduction;
  const bool simplex = inst.ground.type == GroundType::Simplex;
  ProgramBuilder b(sp != nullptr);
  CompiledRelaxation out;
  out.kind = kind;

  std::vector<std::string> names;
  std::vector<double> vals;
  for (std::size_t j = 0; j < n; ++j) {
    names.push_back("x[" + std::to_string(j) + "]");
    if (sp) vals.push_back(sp->x(j));
  }
  for (std::size_t j = 0; j < n; ++j) {
    names.push_back("y[" + std::to_string(j) + "]");
    if (sp) vals.push_back(sp->y(j));
  }
  const std::size_t xo = b.add_block(ConeSpec::free(2 * n), names, vals);
  for (std::size_t j = 0; j < n; ++j) {
    out.x_vars.push_back(xo + j);
    out.y_vars.push_back(xo + n + j);
  }
  auto xv = [&](std::size_t j) { return out.x_vars[j]; };
  auto yv = [&](std::size_t j) { return out.y_vars[j]; };

  if (lifted) {
    names.clear();
    vals.clear();
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i <= j; ++i) {
        names.push_back("X[" + std::to_string(i) + "," + std::to_string(j) + "]");
        if (sp) vals.push_back(sp->X(i, j));
      }
    const std::size_t o = b.add_block(ConeSpec::nonneg(names.size()), names, vals);
    for (std::size_t i = 0; i < names.size(); ++i) out.X_vars.push_back(o + i);
  }
  auto Xv = [&](std::size_t i, std::size_t j) { return out.X_vars[svec_index(i, j)]; };

  if (tr.rpt) {
    names.clear();
    vals.clear();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        names.push_back("w[" + std::to_string(i) + "," + std::to_string(j) + "]");
        if (sp) vals.push_back(sp->w(i, j));
      }
    const std::size_t o = b.add_block(ConeSpec::nonneg(n * n), names, vals);
    for (std::size_t i = 0; i < n * n; ++i) out.w_vars.push_back(o + i);
  }

  // ground set
  if (simplex) {
    LinExpr sum;
    for (std::size_t j = 0; j < n; ++j) sum.add(xv(j), 1.0);
    b.add_row(sum, 1.0);
  } else {
    const auto& g = inst.ground;
    for (Eigen::Index r = 0; r < g.A.rows(); ++r) {
      LinExpr e;
      for (std::size_t j = 0; j < n; ++j) e.add(xv(j), g.A(r, j));
      b.add_row(e, g.b(r));
    }
    std::vector<LinExpr> slack;
    for (Eigen::Index r = 0; r < g.C.rows(); ++r) {
      LinExpr e = LinExpr::konst(g.d(r));
      for (std::size_t j = 0; j < n; ++j) e.add(xv(j), -g.C(r, j));
      slack.push_back(e);
    }
    for (std::size_t j = 0; j < n; ++j) slack.push_back(LinExpr::konst(1.0).add(xv(j), -1.0));
    b.add_cone(ConeSpec::nonneg(slack.size()), slack, "ground.slack");
  }

  // P: y <= x and (y, 1, x) in C^{1/kappa}
  {
    std::vector<LinExpr> slack;
    for (std::size_t j = 0; j < n; ++j) slack.push_back(LinExpr::var(xv(j)).add(yv(j), -1.0));
    b.add_cone(ConeSpec::nonneg(n), slack, "pow.slack");
    for (std::size_t j = 0; j < n; ++j)
      b.add_cone(ConeSpec::power(1.0 / k), {LinExpr::var(yv(j)), LinExpr::konst(1.0), LinExpr::var(xv(j))},
                 "pow[" + std::to_string(j) + "]");
  }

  if (lifted && opt.rlt) {
    if (simplex) {
      // Xe = x
      for (std::size_t i = 0; i < n; ++i) {
        LinExpr e = LinExpr::var(xv(i), -1.0);
        for (std::size_t j = 0; j < n; ++j) e.add(Xv(i, j), 1.0);
        b.add_row(e, 0.0);
      }
    } else {
      const auto& g = inst.ground;
      std::vector<LinExpr> ineq;
      // McCormick (X >= 0 is the block itself)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= j; ++i) {
          ineq.push_back(LinExpr::var(Xv(i, j)).add(xv(i), -1.0).add(xv(j), -1.0).add(LinExpr::konst(1.0)));
          ineq.push_back(LinExpr::var(xv(i)).add(Xv(i, j), -1.0));
          if (i != j) ineq.push_back(LinExpr::var(xv(j)).add(Xv(i, j), -1.0));
        }
      auto ax = [&](const MatrixXd& m, Eigen::Index r) {
        LinExpr e;
        for (std::size_t i = 0; i < n; ++i) e.add(xv(i), m(r, i));
        return e;
      };
      auto mx_col = [&](const MatrixXd& m, Eigen::Index r, std::size_t j) {
        LinExpr e;
        for (std::size_t i = 0; i < n; ++i) e.add(Xv(i, j), m(r, i));
        return e;
      };
      auto mxm = [&](const MatrixXd& m1, Eigen::Index r, const MatrixXd& m2, Eigen::Index s) {
        LinExpr e;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) e.add(Xv(i, j), m1(r, i) * m2(s, j));
        return e;
      };
      for (Eigen::Index r = 0; r < g.A.rows(); ++r)
        for (std::size_t j = 0; j < n; ++j) {
          // AX - b x^T = 0
          b.add_row(mx_col(g.A, r, j).add(xv(j), -g.b(r)), 0.0);
          // A x e^T - A X - b e^T + b x^T = 0
          b.add_row(ax(g.A, r).add(mx_col(g.A, r, j), -1.0).add(xv(j), g.b(r)), g.b(r));
        }
      for (Eigen::Index r = 0; r < g.C.rows(); ++r)
        for (std::size_t j = 0; j < n; ++j) {
          // d x^T - C X >= 0
          ineq.push_back(LinExpr::var(xv(j), g.d(r)).add(mx_col(g.C, r, j), -1.0));
          // -(C x e^T - C X - d e^T + d x^T) >= 0
          ineq.push_back(LinExpr::konst(g.d(r)).add(ax(g.C, r), -1.0).add(mx_col(g.C, r, j)).add(xv(j), -g.d(r)));
        }
      for (Eigen::Index r = 0; r < g.A.rows(); ++r)
        for (Eigen::Index s = 0; s < g.A.rows(); ++s) {
          LinExpr e = mxm(g.A, r, g.A, s).add(ax(g.A, r), -g.b(s)).add(ax(g.A, s), -g.b(r));
          b.add_row(e, -g.b(r) * g.b(s));
        }
      for (Eigen::Index r = 0; r < g.C.rows(); ++r)
        for (Eigen::Index s = r; s < g.C.rows(); ++s) {
          LinExpr e = mxm(g.C, r, g.C, s).add(ax(g.C, r), -g.d(s)).add(ax(g.C, s), -g.d(r));
          e.constant += g.d(r) * g.d(s);
          ineq.push_back(e);
        }
      for (Eigen::Index r = 0; r < g.A.rows(); ++r)
        for (Eigen::Index s = 0; s < g.C.rows(); ++s) {
          LinExpr e = mxm(g.A, r, g.C, s).add(ax(g.A, r), -g.d(s)).add(ax(g.C, s), -g.b(r));
          b.add_row(e, -g.b(r) * g.d(s));
        }
      if (!ineq.empty()) b.add_cone(ConeSpec::nonneg(ineq.size()), ineq, "rlt.slack");
    }
  }

  if (lifted) {
    // link y and diag(X)
    if (k == 2.0) {
      for (std::size_t j = 0; j < n; ++j) b.add_row(LinExpr::var(yv(j)).add(Xv(j, j), -1.0), 0.0);
    } else {
      std::vector<LinExpr> slack;
      for (std::size_t j = 0; j < n; ++j)
        slack.push_back(k < 2.0 ? LinExpr::var(yv(j)).add(Xv(j, j), -1.0) : LinExpr::var(Xv(j, j)).add(yv(j), -1.0));
      b.add_cone(ConeSpec::nonneg(n), slack, "link.slack");
      for (std::size_t j = 0; j < n; ++j) {
        const std::string tag = "link[" + std::to_string(j) + "]";
        if (k < 2.0)
          b.add_cone(ConeSpec::power(k / 2.0), {LinExpr::var(Xv(j, j)), LinExpr::konst(1.0), LinExpr::var(yv(j))}, tag);
        else
          b.add_cone(ConeSpec::power(2.0 / k), {LinExpr::var(yv(j)), LinExpr::konst(1.0), LinExpr::var(Xv(j, j))}, tag);
      }
    }
  }

  if (tr.soc) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i)
        b.add_cone(ConeSpec::power(0.5), {LinExpr::var(Xv(i, i)), LinExpr::var(Xv(j, j)), LinExpr::var(Xv(i, j))},
                   "soc[" + std::to_string(i) + "," + std::to_string(j) + "]");
    std::vector<LinExpr> slack;
    for (std::size_t j = 0; j < n; ++j) {
      b.add_cone(ConeSpec::power(0.5), {LinExpr::var(Xv(j, j)), LinExpr::konst(1.0), LinExpr::var(xv(j))},
                 "socd[" + std::to_string(j) + "]");
      slack.push_back(LinExpr::var(xv(j)).add(Xv(j, j), -1.0));
    }
    b.add_cone(ConeSpec::nonneg(n), slack, "socd.slack");
  }

  if (tr.s3) {
    const double r2 = std::sqrt(2.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i) {
        // [[X_ii, X_ij, x_i], [X_ij, X_jj, x_j], [x_i, x_j, 1]] in svec order
        std::vector<LinExpr> ent = {LinExpr::var(Xv(i, i)),      LinExpr::var(Xv(i, j), r2), LinExpr::var(Xv(j, j)),
                                    LinExpr::var(xv(i), r2),     LinExpr::var(xv(j), r2),    LinExpr::konst(1.0)};
        std::vector<double> hint;
        if (n == 2 && simplex && opt.rlt) hint = {1.0, 1.0, -1.0};
        b.add_cone(ConeSpec::psd(3), ent, "s3[" + std::to_string(i) + "," + std::to_string(j) + "]", hint);
      }
  }

  if (tr.sdp || opt.sdp_no_reduction) {
    const double r2 = std::sqrt(2.0);
    std::vector<LinExpr> ent((n + 1) * (n + 2) / 2);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i <= j; ++i) ent[svec_index(i, j)] = LinExpr::var(Xv(i, j), i == j ? 1.0 : r2);
    for (std::size_t i = 0; i < n; ++i) ent[svec_index(i, n)] = LinExpr::var(xv(i), r2);
    ent[svec_index(n, n)] = LinExpr::konst(1.0);
    std::vector<double> hint;
    if (!opt.sdp_no_reduction) {
      hint.assign(n + 1, 1.0);
      hint[n] = -1.0;
    }
    b.add_cone(ConeSpec::psd(n + 1), ent, "sdp", hint);
  }

  if (tr.rpt) {
    std::vector<LinExpr> slack;
    for (std::size_t i = 0; i < n; ++i) {
      LinExpr e = LinExpr::var(yv(i));
      for (std::size_t j = 0; j < n; ++j) e.add(out.w_vars[i * n + j], -1.0);
      slack.push_back(e);
    }
    b.add_cone(ConeSpec::nonneg(n), slack, "rpt.slack");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        b.add_cone(ConeSpec::power(1.0 / k),
                   {LinExpr::var(out.w_vars[i * n + j]), LinExpr::var(xv(j)), LinExpr::var(Xv(i, j))},
                   "rpt[" + std::to_string(i) + "," + std::to_string(j) + "]");
  }

  std::vector<std::pair<std::size_t, double>> obj;
  for (std::size_t j = 0; j < n; ++j) {
    obj.push_back({xv(j), inst.alpha(j)});
    obj.push_back({yv(j), inst.beta(j)});
  }
  out.program = facial_reduce(b.finish(obj));
  return out;
}

}  // namespace detail

/// Compiles a relaxation, attaching the analytic interior start on the simplex.
inline CompiledRelaxation compile(RelaxationKind kind, const Instance& inst) {
  if (inst.ground.type == GroundType::Simplex && inst.n >= 1) {
    inst.validate();
    const StructuralPoint sp = detail::analytic_start(inst);
    CompiledRelaxation c = detail::compile(kind, inst, &sp);
    if (c.program.start && !detail::all_interior(c.program, *c.program.start)) c.program.start.reset();
    return c;
  }
  return detail::compile(kind, inst, nullptr);
}

/// Conic program of the named relaxation.
inline ConicProgram build(RelaxationKind kind, const Instance& inst) { return compile(kind, inst).program; }

/// Full variable vector of the compiled relaxation implied by a structural point.
inline VectorXd assemble_point(RelaxationKind kind, const Instance& inst, const StructuralPoint& sp) {
  const std::size_t n = inst.n;
  StructuralPoint full = sp;
  if (full.X.size() == 0) full.X = MatrixXd::Zero(n, n);
  if (full.w.size() == 0) full.w = MatrixXd::Zero(n, n);
  if (static_cast<std::size_t>(full.x.size()) != n || static_cast<std::size_t>(full.y.size()) != n)
    throw Error("structural point has the wrong dimension");
  return *detail::compile(kind, inst, &full).program.start;
}

/// Internal comparison variant: P plus X >= 0, the full block and the y/X links,
/// without RLT rows or facial reduction.
inline CompiledRelaxation compile_ps_variant(const Instance& inst) {
  inst.validate();
  const StructuralPoint sp = detail::analytic_start(inst, true);
  detail::CompileOptions opt;
  opt.rlt = false;
  opt.sdp_no_reduction = true;
  CompiledRelaxation c = detail::compile(RelaxationKind::PR, inst, &sp, opt);
  if (c.program.start && !detail::all_interior(c.program, *c.program.start)) c.program.start.reset();
  return c;
}

/// Point of S^kappa lifted to every relaxation: X = x x^T, w_ij = X_ij^k / x_j^(k-1).
inline StructuralPoint rank_one_lift(const VectorXd& x, double kappa) {
  const auto n = x.size();
  StructuralPoint sp;
  sp.x = x;
  sp.y = x.array().pow(kappa);
  sp.X = x * x.transpose();
  sp.w = MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (x(j) > 0) sp.w(i, j) = std::pow(sp.X(i, j), kappa) / std::pow(x(j), kappa - 1.0);
  return sp;
}

// ---------------------------------------------------------------------------
// Membership

inline bool ground_contains(const Instance& inst, const VectorXd& x, double tol) {
  if (static_cast<std::size_t>(x.size()) != inst.n) throw Error("point dimension does not match n");
  if (x.minCoeff() < -tol || x.maxCoeff() > 1.0 + tol) return false;
  if (inst.ground.type == GroundType::Simplex) return std::abs(x.sum() - 1.0) <= tol;
  const auto& g = inst.ground;
  if (g.A.rows() && ((g.A * x - g.b).cwiseAbs().maxCoeff() > tol)) return false;
  if (g.C.rows() && ((g.C * x - g.d).maxCoeff() > tol)) return false;
  return true;
}

/// Is (x, y) in the projection of the relaxation? P and the small PR case are
/// checked in closed form; everything else solves a cone-shift problem.
inline bool membership(RelaxationKind kind, const Instance& geometry, const VectorXd& x, const VectorXd& y,
                       double tol, const SolverSettings& settings = {}) {
  const std::size_t n = geometry.n;
  if (static_cast<std::size_t>(x.size()) != n || static_cast<std::size_t>(y.size()) != n)
    throw Error("point dimension does not match n");
  const double k = geometry.kappa;
  auto in_p = [&] {
    if (!ground_contains(geometry, x, tol)) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (y(j) > x(j) + tol) return false;
      if (y(j) < std::pow(std::max(x(j), 0.0), k) - tol) return false;
    }
    return true;
  };
  if (kind == RelaxationKind::P) return in_p();
  if (kind == RelaxationKind::PR && k == 2.0 && n <= 3 && geometry.ground.type == GroundType::Simplex) {
    if (!in_p()) return false;
    const VectorXd d = x - y;
    for (std::size_t j = 0; j < n; ++j)
      if (d(j) > d.sum() - d(j) + tol) return false;
    return true;
  }
  Instance inst = geometry;
  inst.alpha = VectorXd::Zero(n);
  inst.beta = VectorXd::Zero(n);
  const CompiledRelaxation c = detail::compile(kind, inst, nullptr);
  std::vector<std::pair<std::size_t, double>> fixed;
  for (std::size_t j = 0; j < n; ++j) {
    fixed.push_back({c.x_vars[j], x(j)});
    fixed.push_back({c.y_vars[j], y(j)});
  }
  return feasibility_distance(c.program, fixed, tol, settings).feasible;
}

// ---------------------------------------------------------------------------

/// The unique X with diag(X) = y and Xe = x for n = 3.
template <class Scalar>
std::array<std::array<Scalar, 3>, 3> lift_unique_n3(const std::array<Scalar, 3>& x, const std::array<Scalar, 3>& y) {
  std::array<Scalar, 3> d;
  for (int i = 0; i < 3; ++i) d[i] = x[i] - y[i];
  std::array<std::array<Scalar, 3>, 3> m{};
  for (int i = 0; i < 3; ++i) {
    m[i][i] = y[i];
    for (int j = i + 1; j < 3; ++j) {
      const int kk = 3 - i - j;
      m[i][j] = m[j][i] = (d[i] + d[j] - d[kk]) / Scalar(2);
    }
  }
  return m;
}

}  // namespace simplexpow
