// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#include <catch_amalgamated.hpp>

#include "simplexpow/ipm_solver.hpp"
#include "simplexpow/relaxations.hpp"

using namespace simplexpow;
using Catch::Matchers::WithinAbs;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(v.size());
  std::size_t i = 0;
  for (double e : v) out(i++) = e;
  return out;
}

Instance inst2(double kappa, VectorXd a, VectorXd b) { return Instance::simplex(kappa, std::move(a), std::move(b)); }

}  // namespace

TEST_CASE("linear program over the nonnegative orthant", "[ipm]") {
  // min x0 + 2 x1 s.t. x0 + x1 = 1, x >= 0
  ConicProgram p;
  p.num_vars = 2;
  p.objective = vec({1, 2});
  p.equalities = {{0, 0, 1.0}, {0, 1, 1.0}};
  p.rhs = vec({1});
  p.cones = {{ConeSpec::nonneg(2), 0, {}}};
  auto r = solve(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK_THAT(r.objective, WithinAbs(1.0, 1e-8));
  CHECK(r.certified_gap <= 1e-8);
  CHECK(r.used_phase1);
}

TEST_CASE("small semidefinite program", "[ipm]") {
  // min <C, X> s.t. tr X = 1, X psd: value = smallest eigenvalue of C
  MatrixXd c(2, 2);
  c << 2, 1, 1, 3;
  ConicProgram p;
  p.num_vars = 3;
  p.objective = svec(c);
  p.equalities = {{0, 0, 1.0}, {0, 2, 1.0}};
  p.rhs = vec({1});
  p.cones = {{ConeSpec::psd(2), 0, {}}};
  auto r = solve(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(c);
  CHECK_THAT(r.objective, WithinAbs(es.eigenvalues()(0), 1e-7));
}

TEST_CASE("inconsistent equalities are infeasible", "[ipm]") {
  ConicProgram p;
  p.num_vars = 1;
  p.objective = vec({1});
  p.equalities = {{0, 0, 1.0}, {1, 0, 1.0}};
  p.rhs = vec({1, 2});
  p.cones = {{ConeSpec::nonneg(1), 0, {}}};
  CHECK(solve(p).status == SolveStatus::Infeasible);
  // no interior point: x = -1 with x >= 0
  p.equalities = {{0, 0, 1.0}};
  p.rhs = vec({-1});
  CHECK(solve(p).status == SolveStatus::Infeasible);
}

TEST_CASE("P relaxation solves", "[ipm]") {
  SECTION("symmetric convex minimum") {
    auto c = compile(RelaxationKind::P, inst2(2, vec({0, 0}), vec({1, 1})));
    REQUIRE(c.program.start);
    auto r = solve(c.program);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK_FALSE(r.used_phase1);
    CHECK_THAT(r.objective, WithinAbs(0.5, 1e-7));
    CHECK((c.extract_x(r.x) - vec({0.5, 0.5})).norm() < 1e-4);
    CHECK((c.extract_y(r.x) - vec({0.25, 0.25})).norm() < 1e-4);
  }
  SECTION("inexact instance") {
    auto r = solve(build(RelaxationKind::P, inst2(2, vec({-2, 0}), vec({1, -1}))));
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK_THAT(r.objective, WithinAbs(-1.25, 1e-6));
  }
}

TEST_CASE("PRS closes the gap on the inexact instance", "[ipm]") {
  auto r = solve(build(RelaxationKind::PRS, inst2(2, vec({-2, 0}), vec({1, -1}))));
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK_THAT(r.objective, WithinAbs(-1.0, 1e-5));
}

TEST_CASE("optimal results satisfy the solve contract", "[ipm]") {
  SolverSettings s;
  for (auto kind : kAllKinds) {
    for (double kappa : {1.5, 2.0, 3.0}) {
      auto c = compile(kind, inst2(kappa, vec({0.3, -0.2, 0.1}), vec({-0.5, 0.4, 0.2})));
      auto r = solve(c.program, s);
      INFO(to_string(kind) << " kappa " << kappa);
      REQUIRE(r.status == SolveStatus::Optimal);
      const auto res = program_residuals(c.program, r.x);
      CHECK(res.equality_residual <= s.tol_feas);
      CHECK(res.cone_violation <= 1e-12);
      CHECK(r.certified_gap <= s.tol_gap);
      // the analytic start is feasible, so the optimum cannot exceed it by more than the gap
      CHECK(r.objective <= c.program.objective.dot(*c.program.start) + r.certified_gap);
    }
  }
}

TEST_CASE("solves are deterministic", "[ipm]") {
  auto p = build(RelaxationKind::PRSV, inst2(2.5, vec({0.3, -0.2, 0.1}), vec({-0.5, 0.4, 0.2})));
  auto a = solve(p), b = solve(p);
  CHECK(a.x == b.x);
  CHECK(a.newton_steps == b.newton_steps);
}

TEST_CASE("prepared programs reuse the start across objectives", "[ipm]") {
  auto c = compile(RelaxationKind::PR, inst2(2, vec({0, 0, 0}), vec({0, 0, 0})));
  PreparedProgram prep(c.program);
  REQUIRE(prep.has_interior_start());
  VectorXd obj = VectorXd::Zero(c.program.num_vars);
  obj(c.x_vars[0]) = 1.0;  // min x_0 → 0
  auto r = prep.solve(obj);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK_THAT(r.objective, WithinAbs(0.0, 1e-7));
  obj(c.x_vars[0]) = -1.0;  // max x_0 → 1
  r = prep.solve(obj);
  CHECK_THAT(r.objective, WithinAbs(-1.0, 1e-7));
}

TEST_CASE("feasibility distance for lifted systems", "[ipm]") {
  Instance g2 = inst2(2, vec({0, 0}), vec({0, 0}));
  SECTION("PR at a rank-one point") {
    auto c = compile(RelaxationKind::PR, g2);
    auto f = feasibility_distance(c.program, {{c.x_vars[0], 0.5}, {c.x_vars[1], 0.5}, {c.y_vars[0], 0.25}, {c.y_vars[1], 0.25}},
                                  1e-6);
    CHECK(f.feasible);
  }
  SECTION("PR excludes the P point with unequal differences") {
    auto c = compile(RelaxationKind::PR, g2);
    auto f = feasibility_distance(c.program, {{c.x_vars[0], 0.5}, {c.x_vars[1], 0.5}, {c.y_vars[0], 0.5}, {c.y_vars[1], 0.25}},
                                  1e-6);
    CHECK_FALSE(f.feasible);
  }
  SECTION("PRs excludes the minor-violating point") {
    Instance g3 = inst2(2, vec({0, 0, 0}), vec({0, 0, 0}));
    auto c = compile(RelaxationKind::PRs, g3);
    std::vector<std::pair<std::size_t, double>> fixed = {
        {c.x_vars[0], 1.0 / 3}, {c.x_vars[1], 1.0 / 3}, {c.x_vars[2], 1.0 / 3},
        {c.y_vars[0], 1.0 / 9}, {c.y_vars[1], 1.0 / 9}, {c.y_vars[2], 1.0 / 3}};
    auto f = feasibility_distance(c.program, fixed, 1e-6);
    CHECK_FALSE(f.feasible);
    CHECK(f.slack > 1e-3);
  }
}
