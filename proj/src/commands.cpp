#include "mlag/commands.hpp"

#include <cmath>
#include <functional>
#include <ostream>

#include "mlag/io.hpp"

namespace mlag {

namespace {

int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

double require_t(const RunConfig& cfg) {
  if (!cfg.t) throw ConfigError("$.t: required for this command");
  return *cfg.t;
}

ContinuationOptions branch_options(const RunConfig& cfg) {
  ContinuationOptions o = cfg.continuation;
  o.t_stop.reset();
  return o;
}

} // namespace

std::string sidecar_path(const std::string& csv_path) {
  const auto slash = csv_path.find_last_of('/');
  const auto dot = csv_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv_path + ".json";
  return csv_path.substr(0, dot) + ".json";
}

int cmd_mesh(const RunConfig& cfg, const std::string& out, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const SurfacePtr s = build_surface(cfg);
    write_text(out, mesh_json(*s, cfg.hash));
    log << "mesh: " << s->num_vertices() << " vertices, " << s->num_classes << " classes, "
        << s->triangles.size() << " triangles, genus " << s->genus << ", area " << s->area << "\n";
    if (cfg.cubic) {
      const std::string qpath = out.substr(0, out.find_last_of('.')) + ".cubic.json";
      write_text(qpath, cubic_json(build_cubic(cfg, s), cfg.hash));
      log << "cubic: " << qpath << "\n";
    }
  });
}

int cmd_solve(const RunConfig& cfg, const std::string& out, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const double t = require_t(cfg);
    const SurfacePtr s = build_surface(cfg);
    Problem p(s, build_cubic(cfg, s));
    const SolutionPoint sp = newton_solve(p, ScalarField::Zero(p.size()), t, cfg.newton);
    write_text(out, solution_json(sp, cfg.hash));
    log << "solve: t = " << t << ", residual " << sp.residual_norm << ", lambda_min " << sp.lambda_min
        << (sp.stable ? " (stable)" : " (unstable)") << ", max u " << sp.u.maxCoeff() << "\n";
  });
}

int cmd_continue(const RunConfig& cfg, const std::string& out, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const SurfacePtr s = build_surface(cfg);
    Problem p(s, build_cubic(cfg, s));
    CurveSummary sum;
    sum.T_bound = nonexistence_bound(p); // ZeroCubic for q = 0
    const SolutionCurve curve = trace_curve(p, cfg.continuation);
    std::optional<NumericalError> fold_error;
    if (!cfg.continuation.t_stop) {
      FoldOptions fo;
      fo.tol = cfg.newton.tol;
      fo.newton_max_iter = cfg.newton.max_iter;
      fo.epsilon = cfg.fold_epsilon;
      try {
        const FoldResult f = detect_fold(p, curve, fo);
        sum.T0 = f.T0;
        sum.fold = f.fold_point;
      } catch (const NumericalError& e) {
        fold_error = e;
      }
    }
    write_text(out, curve_csv(curve, *s, cfg.hash));
    write_text(sidecar_path(out), curve_json(curve, sum, cfg.hash));
    log << "continue: " << curve.points.size() << " points, last t = " << curve.points.back().t << "\n";
    if (sum.T0) log << "T0 estimate: " << *sum.T0 << "\n";
    log << "T bound: " << *sum.T_bound << "\n";
    if (fold_error) throw *fold_error;
  });
}

int cmd_mpass(const RunConfig& cfg, const std::string& out, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const double t = require_t(cfg);
    const SurfacePtr s = build_surface(cfg);
    Problem p(s, build_cubic(cfg, s));
    if (!(integrate(*s, p.potential_v(t)) > 0.0))
      throw DegenerateNorm("V = 16 t^2 ||q||^2 vanishes; the V-norm is degenerate at t = " + std::to_string(t));
    const SolutionPoint stable = branch_point(p, t, branch_options(cfg));
    const CutoffPair cp = build_cutoffs(cfg.theta);
    const MountainPassResult r = find_mountain_pass(p, stable, t, cp, cfg.mpass);
    write_text(out, mpass_json(r, cfg.hash));
    log << "mpass: t = " << t << ", u2 in [" << r.point.u.minCoeff() << ", " << r.point.u.maxCoeff()
        << "], residual " << r.point.residual_norm << ", lambda_min " << r.point.lambda_min
        << ", V-separation " << r.vnorm_separation << "\n";
  });
}

int cmd_frame(const RunConfig& cfg, const std::string& out, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.frame.path.size() < 2) throw ConfigError("$.frame.path: required for this command");
    std::unique_ptr<FieldSampler> sampler;
    if (cfg.frame.sampler == SamplerKind::Trivial) {
      sampler = trivial_disk_sampler();
    } else {
      const double t = cfg.t.value_or(0.0);
      const SurfacePtr s = build_surface(cfg);
      const CubicDifferential q = build_cubic(cfg, s);
      Problem p(s, q);
      const SolutionPoint sp = branch_point(p, t, branch_options(cfg));
      sampler = std::make_unique<MeshSampler>(scaled(q, t), sp.u);
    }
    const FrameSheet sheet = integrate_frame(*sampler, cfg.frame.path, cfg.frame.options);
    write_text(out, frame_json(sheet, sampler->holomorphic(), cfg.hash));
    log << "frame: " << sheet.path.size() << " nodes, length " << sheet.length << ", unitarity defect "
        << sheet.max_unitarity() << ", det defect " << sheet.max_determinant() << "\n";
    if (!sampler->holomorphic()) log << "frame: q is not holomorphic; flatness is not expected\n";
  });
}

int cmd_wpcheck(const RunConfig& cfg, const std::string& out, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const SurfacePtr s = build_surface(cfg);
    Problem p(s, build_cubic(cfg, s));
    WpOptions o;
    o.stencil = cfg.wp.stencil;
    std::vector<AreaRecord> recs;
    for (double h : cfg.wp.h) {
      recs.push_back(second_variation_check(p, h, o));
      const AreaRecord& r = recs.back();
      log << "wpcheck: h = " << h << ", fd2 " << r.fd2 << ", exact " << r.exact << ", rel_err " << r.rel_err
          << ", adot " << r.adot << "\n";
    }
    write_text(out, wpcheck_csv(cfg.wp.h, recs, cfg.hash));
  });
}

int cmd_selftest(std::ostream& log) {
  int failures = 0;
  auto check = [&](const char* name, const std::function<bool()>& f) {
    bool ok = false;
    try {
      ok = f();
    } catch (const std::exception& e) {
      log << "  (" << e.what() << ")\n";
    }
    log << (ok ? "PASS " : "FAIL ") << name << "\n";
    failures += !ok;
  };

  const SurfacePtr torus = build_flat_torus(8, 1.0, 1.0);
  check("trivial solution at t = 0", [&] {
    Problem p(torus, constant_cubic(torus, 1.0));
    const SolutionPoint sp = newton_solve(p, ScalarField::Zero(p.size()), 0.0);
    return sp.u.cwiseAbs().maxCoeff() <= 1e-10 && sp.lambda_min > 1.9;
  });
  check("constant-data fold", [&] {
    Problem p(torus, constant_cubic(torus, 1.0));
    const FoldResult f = detect_fold(p, trace_curve(p));
    const double T0 = 1.0 / std::sqrt(54.0);
    return std::abs(f.T0 - T0) <= 1e-3 * T0 && std::abs(f.fold_point.u.mean() - std::log(2.0 / 3.0)) <= 1e-3;
  });
  check("nonexistence bound", [&] {
    Problem p(torus, constant_cubic(torus, 1.0));
    return std::abs(nonexistence_bound(p) - std::pow(0.5, 1.5)) < 1e-12;
  });
  check("D(1) = 1", [&] {
    const ScalarField one = ScalarField::Ones(torus->num_classes);
    return (d_operator(*torus, one) - one).cwiseAbs().maxCoeff() < 1e-12;
  });
  check("su21 defect of 2I", [&] {
    const auto [u, d] = su21_defect<double>(2.0 * Su21Matrix::Identity());
    return std::abs(u - 3.0) < 1e-15 && std::abs(d - 7.0) < 1e-15;
  });
  check("trace-free second fundamental form", [&] {
    return second_fundamental_form(0.7, Complex(0.3, -1.1)).trace().cwiseAbs().maxCoeff() == 0.0;
  });
  check("trivial frame", [&] {
    const auto f = trivial_disk_sampler();
    FrameOptions o;
    o.step = 0.005;
    const FrameSheet sh = integrate_frame(*f, {Complex(0.0, 0.0), Complex(std::tanh(0.5), 0.0)}, o);
    return sh.max_unitarity() <= 1e-8 && sh.max_determinant() <= 1e-8;
  });
  log << (failures ? "selftest FAILED (" + std::to_string(failures) + ")" : std::string("selftest ok")) << "\n";
  return failures ? kExitNumerical : kExitOk;
}

} // namespace mlag
