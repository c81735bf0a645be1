// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mlag/continuation.hpp"
#include "mlag/cutoffs.hpp"
#include "mlag/frame.hpp"
#include "mlag/mpass.hpp"
#include "mlag/su21.hpp"
#include "mlag/wp.hpp"
#include "oracles.hpp"

using namespace mlag;

namespace {

int failures = 0;

// Failed sub-checks are printed before the verdict line.
struct Check {
  bool ok = true;
  void operator()(bool cond, const std::string& what) {
    if (!cond) {
      std::printf("    failed: %s\n", what.c_str());
      ok = false;
    }
  }
};

void criterion(int n, const char* name, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    std::printf("    exception: %s\n", e.what());
    c.ok = false;
  }
  std::printf("%s %d: %s\n", c.ok ? "PASS" : "FAIL", n, name);
  std::fflush(stdout);
  failures += !c.ok;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Problem torus_problem(double c) {
  const auto s = build_flat_torus(8, 1.0, 1.0);
  return Problem(s, constant_cubic(s, c));
}

Problem octagon_problem(int r) {
  const auto s = build_genus2_octagon(r);
  return Problem(s, synthetic_cubic(s, {{0, 6}}, 1.0));
}

} // namespace

int main() {
  const double tol = NewtonOptions{}.tol;
  const CutoffPair cp = build_cutoffs(3.0);

  criterion(1, "trivial solution at t = 0", [&](Check& ck) {
    for (const Problem& p : {torus_problem(1.0), octagon_problem(3)}) {
      const SolutionPoint sp = newton_solve(p, ScalarField::Zero(p.size()), 0.0);
      ck(sp.u.cwiseAbs().maxCoeff() <= 1e-10, fmt("sup |u| = %g", sp.u.cwiseAbs().maxCoeff()));
      if (p.surface->backend == Backend::Torus)
        ck(sp.lambda_min >= 2.0 - tol, fmt("torus lambda_min = %.12g", sp.lambda_min));
      else
        ck(sp.lambda_min > 0.0, fmt("octagon lambda_min = %g", sp.lambda_min));
    }
  });

  criterion(2, "fold of constant data", [&](Check& ck) {
    for (double c : {0.5, 1.0, 2.0}) {
      const Problem p = torus_problem(c);
      const FoldResult f = detect_fold(p, trace_curve(p));
      const double T0 = oracle::kFoldT0UnitC / c;
      ck(std::abs(f.T0 - T0) <= 1e-3 * T0, fmt("c = %g: T0 = %.12g", c, f.T0));
      ck(std::abs(f.fold_point.u.mean() - oracle::kFoldU) <= 1e-3, fmt("c = %g: u_fold = %.12g", c, f.fold_point.u.mean()));
    }
  });

  const Problem oct = octagon_problem(3);
  const Problem tor = torus_problem(1.0);
  double oct_T0 = 0.0;

  criterion(3, "fold lies below the nonexistence bound", [&](Check& ck) {
    for (double c : {0.5, 1.0, 2.0}) {
      const Problem p = torus_problem(c);
      const double T0 = detect_fold(p, trace_curve(p)).T0, T = nonexistence_bound(p);
      ck(T > T0 + 1e-6, fmt("torus: T = %g, T0 = %g", T, T0));
    }
    for (int r : {2, 3}) {
      const Problem p = octagon_problem(r);
      const double T0 = detect_fold(p, trace_curve(p)).T0, T = nonexistence_bound(p);
      if (r == 3) oct_T0 = T0;
      ck(T > T0 + 1e-6, fmt("octagon: T = %g, T0 = %g", T, T0));
    }
  });

  criterion(4, "branch points are nonpositive", [&](Check& ck) {
    std::vector<Problem> matrix = {torus_problem(0.5), torus_problem(1.0), torus_problem(2.0), octagon_problem(2), oct};
    int good = 0;
    for (const Problem& p : matrix) {
      for (const auto& pt : trace_curve(p).points) {
        if (pt.residual_norm > tol) continue;
        ck(pt.u.maxCoeff() <= kTolPositive, fmt("t = %g: max u = %g", pt.t, pt.u.maxCoeff()));
        ++good;
      }
    }
    ck(good >= 50, fmt("only %g converged points", good));
  });

  std::vector<MountainPassResult> passes;
  std::vector<SolutionPoint> stables;

  criterion(5, "mountain-pass solutions", [&](Check& ck) {
    const Problem p = torus_problem(1.0);
    double first_sep = 0.0;
    for (int i : {1, 2, 3}) {
      const auto& r = oracle::kFrozenRoots[i];
      const SolutionPoint st = branch_point(p, r.t);
      const MountainPassResult mp = find_mountain_pass(p, st, r.t, cp);
      const double err = (mp.point.u.array() - r.lower).abs().maxCoeff();
      ck(err <= 1e-4, fmt("t = %g: |u2 - lower root| = %g", r.t, err));
      // constant fields: ||a - b||_V = 4 t |a - b| on unit area
      const double sep = 4.0 * r.t * (r.upper - r.lower);
      ck(std::abs(mp.vnorm_separation - sep) <= 1e-4, fmt("t = %g: separation %g", r.t, mp.vnorm_separation));
      if (i == 1) {
        ck(mp.vnorm_separation > 0.1, fmt("t = %g: separation %g", r.t, mp.vnorm_separation));
        first_sep = mp.vnorm_separation;
      }
      if (i == 3) ck(mp.vnorm_separation < first_sep, fmt("t = %g: separation %g not shrinking", r.t, mp.vnorm_separation));
      passes.push_back(mp);
      stables.push_back(st);
    }
    {
      const double t = 0.136; // just below the fold
      const auto [up, lo] = oracle::scalar_roots(16.0 * t * t);
      const MountainPassResult mp = find_mountain_pass(p, branch_point(p, t), t, cp);
      ck((mp.point.u.array() - lo).abs().maxCoeff() <= 1e-4, fmt("t = %g: u2 = %g", t, mp.point.u.mean()));
      ck(mp.vnorm_separation < 0.1 * first_sep, fmt("t = %g: separation %g", t, mp.vnorm_separation));
      ck(std::abs(mp.vnorm_separation - 4.0 * t * (up - lo)) <= 1e-4, "separation off the closed form");
    }
    if (oct_T0 <= 0.0) oct_T0 = detect_fold(oct, trace_curve(oct)).T0;
    for (double frac : {0.5, 0.7, 0.9}) {
      const double t = frac * oct_T0;
      const SolutionPoint st = branch_point(oct, t);
      const MountainPassResult mp = find_mountain_pass(oct, st, t, cp);
      ck(mp.point.residual_norm <= 1e-8, fmt("octagon t = %g: residual %g", t, mp.point.residual_norm));
      ck(mp.point.lambda_min <= kFoldEpsilon, fmt("octagon t = %g: lambda_min %g", t, mp.point.lambda_min));
      ck(mp.vnorm_separation > 10.0 * tol, fmt("octagon t = %g: separation %g", t, mp.vnorm_separation));
      passes.push_back(mp);
      stables.push_back(st);
    }
  });

  criterion(6, "critical points of the modified functional", [&](Check& ck) {
    ck(!passes.empty(), "no mountain-pass results");
    for (std::size_t k = 0; k < passes.size(); ++k) {
      const Problem& p = k < 3 ? tor : oct;
      const MountainPassResult& mp = passes[k];
      ck(mp.point.u.maxCoeff() <= kTolPositive, fmt("t = %g: max u2 = %g", mp.point.t, mp.point.u.maxCoeff()));
      ck(mp.point.residual_norm <= 10.0 * tol, fmt("t = %g: residual %g", mp.point.t, mp.point.residual_norm));
      const double g1 = l2_norm(*p.surface, functional_gradient(p, mp.point.u, mp.point.t, cp));
      ck(g1 <= 10.0 * tol, fmt("t = %g: gradient at u2 %g", mp.point.t, g1));
      const double g0 = l2_norm(*p.surface, functional_gradient(p, stables[k].u, stables[k].t, cp));
      ck(g0 <= 10.0 * tol, fmt("t = %g: gradient at u1 %g", stables[k].t, g0));
    }
  });

  criterion(7, "area functional and second variation", [&](Check& ck) {
    const auto o4 = build_genus2_octagon(4);
    SolutionPoint zero;
    zero.u = ScalarField::Zero(o4->num_classes);
    const double A = area_functional(zero, *o4);
    ck(std::abs(A + 4.0 * M_PI) <= 0.02 * 4.0 * M_PI, fmt("octagon area functional %g", A));

    const AreaRecord rt = second_variation_check(torus_problem(1.0), 0.01);
    ck(rt.rel_err <= 0.02, fmt("torus fd2 rel_err %g", rt.rel_err));
    ck(std::abs(rt.adot) <= 1e-3, fmt("torus adot %g", rt.adot));
    const AreaRecord ro = second_variation_check(oct, 0.04);
    ck(ro.rel_err <= 0.05, fmt("octagon fd2 rel_err %g", ro.rel_err));
    ck(std::abs(ro.adot) <= 1e-3, fmt("octagon adot %g", ro.adot));

    const ScalarField one = ScalarField::Ones(oct.size());
    const double d1 = (d_operator(oct.op, one) - one).cwiseAbs().maxCoeff();
    ck(d1 <= 1e-12, fmt("|D(1) - 1| = %g", d1));
    std::mt19937 rng(7);
    std::normal_distribution<double> nd;
    const auto& m = oct.mass();
    for (int i = 0; i < 20; ++i) {
      ScalarField f(oct.size()), g(oct.size());
      for (int c = 0; c < oct.size(); ++c) {
        f[c] = nd(rng);
        g[c] = nd(rng);
      }
      const ScalarField Df = d_operator(oct.op, f), Dg = d_operator(oct.op, g);
      const double a = Df.dot(m.cwiseProduct(g)), b = f.dot(m.cwiseProduct(Dg));
      ck(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)), fmt("asymmetry %g vs %g", a, b));
      ck(Df.dot(m.cwiseProduct(f)) > 0.0, "D not positive");
    }
  });

  criterion(8, "frame integration", [&](Check& ck) {
    const auto f = trivial_disk_sampler();
    const Complex end(std::tanh(0.5), 0.0);
    std::vector<double> d;
    for (double h : {0.04, 0.02, 0.01}) {
      FrameOptions o;
      o.step = h;
      const FrameSheet sh = integrate_frame(*f, {0.0, end}, o);
      d.push_back(std::max(sh.max_unitarity(), sh.max_determinant()));
    }
    ck(d.back() <= 1e-8, fmt("defect over length 1: %g", d.back()));
    ck(std::log2(d[0] / d[1]) >= 3.5, fmt("order %g", std::log2(d[0] / d[1])));
    ck(std::log2(d[1] / d[2]) >= 3.5, fmt("order %g", std::log2(d[1] / d[2])));

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> us(0.05, 5.0), uq(-10.0, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const auto sff = second_fundamental_form(us(rng), Complex(uq(rng), uq(rng)));
      worst = std::max(worst, sff.trace().cwiseAbs().maxCoeff());
    }
    ck(worst == 0.0, fmt("second fundamental form trace %g", worst));

    const auto loop = square_loop(Complex(-0.1, -0.2), 0.4);
    std::vector<double> hol;
    for (double h : {0.04, 0.02, 0.01}) {
      FrameOptions o;
      o.step = h;
      hol.push_back(loop_holonomy_defect(*f, loop, o));
    }
    ck(std::log2(hol[0] / hol[1]) >= 3.5 && std::log2(hol[1] / hol[2]) >= 3.5,
       fmt("holonomy defects %g, %g", hol[1], hol[2]));
  });

  criterion(9, "analytic inequalities", [&](Check& ck) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ua(0.0, 8.0), ub(0.0, 50.0);
    for (int i = 0; i < 10000; ++i) {
      const double a = std::exp(ua(rng)), b = ub(rng);
      const auto [H, Hs] = legendre_pair(a, b);
      ck(a * b <= (H + Hs) * (1.0 + 1e-12), fmt("Legendre fails at a = %g, b = %g", a, b));
    }
    const GrowthConstants g = growth_constants(cp);
    ck(std::isfinite(g.c1) && std::isfinite(g.c2), fmt("growth constants %g, %g", g.c1, g.c2));
    const double t = 0.5 * oct_T0;
    const auto F = [&](double k) { return functional_value(oct, ScalarField::Constant(oct.size(), k), t, cp); };
    ck(F(-20.0) < F(-10.0) && F(-40.0) < F(-20.0), "functional not decreasing along constants");
    const NormEquivalence ne = norm_equivalence(oct, t);
    ck(ne.lambda_min > 0.0 && std::isfinite(ne.constant), fmt("norm equivalence %g, %g", ne.lambda_min, ne.constant));
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
