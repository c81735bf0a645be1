#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mlag/mpass.hpp"
#include "oracles.hpp"

using namespace mlag;

namespace {

Problem torus_problem() {
  const auto s = build_flat_torus(8, 1.0, 1.0);
  return Problem(s, constant_cubic(s, 1.0));
}

Problem octagon_problem() {
  const auto s = build_genus2_octagon(2);
  return Problem(s, synthetic_cubic(s, {{0, 6}}, 1.0));
}

} // namespace

TEST_CASE("gradient is the derivative of the functional") {
  const Problem p = octagon_problem();
  const CutoffPair cp = build_cutoffs(3.0);
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  ScalarField u(p.size()), d(p.size());
  for (int i = 0; i < p.size(); ++i) {
    u[i] = 0.6 * nd(rng); // both sides of 0 and 1
    d[i] = nd(rng);
  }
  const double t = 0.3, h = 1e-6;
  const double fd = (functional_value(p, u + h * d, t, cp) - functional_value(p, u - h * d, t, cp)) / (2 * h);
  CHECK(fd == doctest::Approx(functional_gradient_weak(p, u, t, cp).dot(d)).epsilon(1e-6));
}

TEST_CASE("branch points are critical points of the modified functional") {
  const Problem p = octagon_problem();
  const CutoffPair cp = build_cutoffs(3.0);
  ScalarField u = ScalarField::Zero(p.size());
  for (double t : {0.1, 0.3, 0.5}) {
    const SolutionPoint sp = newton_solve(p, u, t);
    u = sp.u;
    const ScalarField g = functional_gradient(p, sp.u, t, cp);
    CHECK(l2_norm(*p.surface, g) <= 10.0 * 1e-10);
  }
}

TEST_CASE("V-norm") {
  const Problem p = torus_problem();
  CHECK_THROWS_AS(v_norm(p, ScalarField::Ones(p.size()), 0.0), DegenerateNorm);
  // constant field: ||1||_V^2 = integral V = 16 t^2
  CHECK(v_norm(p, ScalarField::Ones(p.size()), 0.1) == doctest::Approx(0.4));
  const NormEquivalence ne = norm_equivalence(p, 0.1);
  CHECK(ne.lambda_min > 0.0);
  CHECK(std::isfinite(ne.constant));
  CHECK(ne.lambda_min == doctest::Approx(0.16));
}

TEST_CASE("functional decreases along low constants") {
  const Problem p = octagon_problem();
  const CutoffPair cp = build_cutoffs(3.0);
  const double t = 0.3;
  const auto F = [&](double k) { return functional_value(p, ScalarField::Constant(p.size(), k), t, cp); };
  CHECK(F(-20.0) < F(-10.0));
  CHECK(F(-40.0) < F(-20.0));
}

TEST_CASE("mountain pass on constant data finds the lower root") {
  const Problem p = torus_problem();
  const CutoffPair cp = build_cutoffs(3.0);
  const auto& r = oracle::kFrozenRoots[2];
  const SolutionPoint stable = newton_solve(p, ScalarField::Zero(p.size()), r.t);
  const MountainPassResult mp = find_mountain_pass(p, stable, r.t, cp);
  CHECK(std::abs(mp.point.u.maxCoeff() - r.lower) < 1e-6);
  CHECK(std::abs(mp.point.u.minCoeff() - r.lower) < 1e-6);
  CHECK(mp.point.lambda_min < 0.0);
  CHECK(mp.energy > mp.energy_stable);
  CHECK(mp.vnorm_separation > 0.1);
}

TEST_CASE("mountain pass on the octagon") {
  const Problem p = octagon_problem();
  const CutoffPair cp = build_cutoffs(3.0);
  const double t = 0.4;
  const SolutionPoint stable = newton_solve(p, ScalarField::Zero(p.size()), t);
  const MountainPassResult mp = find_mountain_pass(p, stable, t, cp);
  CHECK(mp.point.u.maxCoeff() <= kTolPositive);
  CHECK(mp.point.residual_norm <= 1e-9);
  CHECK(mp.point.lambda_min <= kFoldEpsilon);
  CHECK(mp.vnorm_separation > 1e-9);
}

TEST_CASE("mountain pass input checks") {
  const Problem p = torus_problem();
  const CutoffPair cp = build_cutoffs(3.0);
  const SolutionPoint s0 = newton_solve(p, ScalarField::Zero(p.size()), 0.0);
  CHECK_THROWS_AS(find_mountain_pass(p, s0, 0.0, cp), DegenerateNorm);
  const SolutionPoint s1 = newton_solve(p, ScalarField::Zero(p.size()), 0.1);
  CHECK_THROWS_AS(find_mountain_pass(p, s1, 0.05, cp), InvalidArgument);
}
