// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#include <catch_amalgamated.hpp>

#include <random>

#include "simplexpow/conic_core.hpp"

using namespace simplexpow;
using Catch::Matchers::WithinAbs;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(v.size());
  std::size_t i = 0;
  for (double e : v) out(i++) = e;
  return out;
}

// Interior sample for each cone kind.
VectorXd interior_point(const ConeSpec& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 2.0);
  switch (c.kind) {
    case ConeKind::NonNeg: {
      VectorXd v(c.dim());
      for (auto& e : v) e = u(rng);
      return v;
    }
    case ConeKind::Power: {
      const double x1 = u(rng), x2 = u(rng);
      const double bound = std::pow(x1, c.gamma) * std::pow(x2, 1 - c.gamma);
      std::uniform_real_distribution<double> s(-0.9, 0.9);
      return vec({x1, x2, s(rng) * bound});
    }
    case ConeKind::Psd: {
      MatrixXd g = MatrixXd::Random(c.size, c.size);
      MatrixXd m = g * g.transpose() + 0.5 * MatrixXd::Identity(c.size, c.size);
      return svec(m);
    }
    default: return VectorXd::Zero(c.dim());
  }
}

std::vector<ConeSpec> sample_cones() {
  return {ConeSpec::nonneg(3), ConeSpec::power(0.5), ConeSpec::power(0.3), ConeSpec::power(0.8),
          ConeSpec::psd(1), ConeSpec::psd(2), ConeSpec::psd(3)};
}

}  // namespace

TEST_CASE("cone membership examples", "[conic_core]") {
  const auto p = ConeSpec::power(0.5);
  CHECK(cone_contains(p, vec({1, 1, 1}), 0.0));
  CHECK_FALSE(cone_contains(p, vec({1, 1, 1.01}), 0.0));
  MatrixXd m(2, 2);
  m << 1.0 / 9, 2.0 / 9, 2.0 / 9, 1.0 / 9;
  CHECK_FALSE(cone_contains(ConeSpec::psd(2), svec(m), 1e-12));
  CHECK(cone_contains(ConeSpec::psd(2), svec(MatrixXd::Identity(2, 2)), 0.0));
  CHECK(cone_contains(ConeSpec::nonneg(2), vec({0, 1}), 0.0));
  CHECK_FALSE(cone_contains(ConeSpec::nonneg(2), vec({-1e-3, 1}), 1e-4));
  // slightly negative x1 is clamped to zero within tolerance
  CHECK(cone_contains(p, vec({-1e-9, 1, 0}), 1e-8));
}

TEST_CASE("cone specs reject invalid parameters", "[conic_core]") {
  CHECK_THROWS_AS(ConeSpec::power(0.0), Error);
  CHECK_THROWS_AS(ConeSpec::power(1.0), Error);
  CHECK_THROWS_AS(ConeSpec::psd(0), Error);
  CHECK_THROWS_AS(cone_contains(ConeSpec::power(0.5), vec({1, 1}), 0.0), Error);
  CHECK_THROWS_AS(cone_contains(ConeSpec::nonneg(1), vec({1}), -1.0), Error);
}

TEST_CASE("svec preserves the Frobenius inner product", "[conic_core]") {
  MatrixXd a = MatrixXd::Random(4, 4), b = MatrixXd::Random(4, 4);
  a = a + a.transpose().eval();
  b = b + b.transpose().eval();
  CHECK_THAT(svec(a).dot(svec(b)), WithinAbs((a.array() * b.array()).sum(), 1e-12));
  CHECK((smat(svec(a)) - a).norm() < 1e-12);
  CHECK(svec_index(1, 2) == 4);
  CHECK(svec_side(10) == 4);
}

TEST_CASE("barrier values at unit points", "[conic_core]") {
  auto nn = barrier_eval(ConeSpec::nonneg(2), vec({1, 1}));
  CHECK_THAT(nn.value, WithinAbs(0.0, 1e-15));
  CHECK((nn.gradient - vec({-1, -1})).norm() < 1e-15);

  auto ps = barrier_eval(ConeSpec::psd(2), svec(MatrixXd::Identity(2, 2)));
  CHECK_THAT(ps.value, WithinAbs(0.0, 1e-15));
  CHECK((smat(ps.gradient) + MatrixXd::Identity(2, 2)).norm() < 1e-14);

  auto pw = barrier_eval(ConeSpec::power(0.5), vec({1, 1, 0}));
  CHECK_THAT(pw.value, WithinAbs(0.0, 1e-15));

  CHECK_THROWS_AS(barrier_eval(ConeSpec::power(0.5), vec({1, 1, 1})), Error);
  CHECK_THROWS_AS(barrier_eval(ConeSpec::nonneg(1), vec({0})), Error);
}

TEST_CASE("barrier derivatives match central differences", "[conic_core]") {
  std::mt19937_64 rng(7);
  const double h = 1e-6;
  for (const auto& cone : sample_cones()) {
    for (int trial = 0; trial < 10; ++trial) {
      const VectorXd x = interior_point(cone, rng);
      const auto be = barrier_eval(cone, x);
      const auto n = x.size();
      VectorXd g_fd(n);
      MatrixXd h_fd(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        VectorXd xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        const auto bp = barrier_eval(cone, xp), bm = barrier_eval(cone, xm);
        g_fd(i) = (bp.value - bm.value) / (2 * h);
        h_fd.col(i) = (bp.gradient - bm.gradient) / (2 * h);
      }
      INFO("cone kind " << static_cast<int>(cone.kind) << " size " << cone.size);
      CHECK((g_fd - be.gradient).norm() <= 1e-5 * std::max(1.0, be.gradient.norm()));
      CHECK((h_fd - be.hessian).norm() <= 1e-5 * std::max(1.0, be.hessian.norm()));
    }
  }
}

TEST_CASE("barrier gradients are logarithmically homogeneous", "[conic_core]") {
  std::mt19937_64 rng(11);
  for (const auto& cone : sample_cones()) {
    const VectorXd x = interior_point(cone, rng);
    const auto g = barrier_eval(cone, x).gradient;
    for (double t : {0.25, 3.0}) {
      const auto gt = barrier_eval(cone, (t * x).eval()).gradient;
      CHECK((gt - g / t).norm() <= 1e-10 * std::max(1.0, g.norm()));
    }
    // <grad, x> = -nu
    CHECK_THAT(g.dot(x), WithinAbs(-cone.barrier_parameter(), 1e-10));
  }
}

TEST_CASE("membership is monotone in tolerance", "[conic_core]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& cone : sample_cones()) {
    for (int trial = 0; trial < 200; ++trial) {
      VectorXd p(cone.dim());
      for (auto& e : p) e = u(rng);
      bool prev = false;
      for (double tol : {0.0, 1e-6, 1e-3, 0.1, 1.0, 10.0}) {
        const bool now = cone_contains(cone, p, tol);
        CHECK((!prev || now));
        prev = now;
      }
    }
  }
}

TEST_CASE("half power cone equals rotated second-order cone", "[conic_core]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  const auto cone = ConeSpec::power(0.5);
  int agree = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const VectorXd p = vec({u(rng), u(rng), u(rng)});
    const bool rsoc = p(0) >= 0 && p(1) >= 0 && p(0) * p(1) >= p(2) * p(2);
    // skip points within roundoff of the boundary
    if (std::abs(p(0) * p(1) - p(2) * p(2)) < 1e-12) continue;
    agree += cone_contains(cone, p, 0.0) == rsoc;
    CHECK(cone_contains(cone, p, 0.0) == rsoc);
  }
  CHECK(agree > 4900);
}

TEST_CASE("program residuals on a trivial program", "[conic_core]") {
  ConicProgram prog;
  prog.num_vars = 1;
  prog.objective = VectorXd::Zero(1);
  prog.rhs = VectorXd(0);
  prog.cones.push_back({ConeSpec::nonneg(1), 0, {}});
  prog.validate();
  auto r = program_residuals(prog, vec({1}));
  CHECK(r.equality_residual == 0.0);
  CHECK(r.cone_violation == 0.0);
  r = program_residuals(prog, vec({-1}));
  CHECK(r.equality_residual == 0.0);
  CHECK(r.cone_violation == 1.0);
  CHECK_THROWS_AS(program_residuals(prog, vec({1, 2})), Error);
}

TEST_CASE("program validation rejects bad slices", "[conic_core]") {
  ConicProgram prog;
  prog.num_vars = 3;
  prog.objective = VectorXd::Zero(3);
  prog.rhs = VectorXd(0);
  prog.cones.push_back({ConeSpec::nonneg(2), 0, {}});
  CHECK_THROWS_AS(prog.validate(), Error);
  prog.cones.push_back({ConeSpec::free(1), 1, {}});
  CHECK_THROWS_AS(prog.validate(), Error);
  prog.cones.back().offset = 2;
  CHECK_NOTHROW(prog.validate());
}
