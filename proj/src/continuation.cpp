#include "mlag/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mlag {

namespace {

bool strictly_below(double a, std::optional<double> bound) { return !bound || a < *bound; }

// Smallest root beyond t_last of the quadratic through three (t, y) samples;
// falls back to the secant through the last two.
double extrapolate_zero(const double t[3], const double y[3]) {
  const double d01 = (y[1] - y[0]) / (t[1] - t[0]);
  const double d12 = (y[2] - y[1]) / (t[2] - t[1]);
  const double a = (d12 - d01) / (t[2] - t[0]);
  const double b = d12 - a * (t[2] + t[1]); // y = a t^2 + b t + c
  const double c = y[2] - a * t[2] * t[2] - b * t[2];
  const double secant = d12 < 0.0 ? t[2] - y[2] / d12 : std::numeric_limits<double>::infinity();
  if (std::abs(a) < 1e-14 * std::max(1.0, std::abs(b))) return secant;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return secant;
  const double sq = std::sqrt(disc);
  double best = std::numeric_limits<double>::infinity();
  for (double r : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)})
    if (r > t[2] && r < best) best = r;
  return std::isfinite(best) ? best : secant;
}

} // namespace

SolutionCurve trace_curve(const Problem& p, const ContinuationOptions& opts) {
  if (!(opts.dt0 > 0.0)) throw InvalidArgument("dt0 must be positive");
  NewtonOptions nopts;
  nopts.tol = opts.tol;
  nopts.max_iter = opts.newton_max_iter;

  // Past the nonexistence bound no step can succeed.
  std::optional<double> bound;
  if (p.qnorm2.maxCoeff() > 0.0) bound = nonexistence_bound(p);

  SolutionCurve curve;
  curve.points.push_back(newton_solve(p, ScalarField::Zero(p.size()), 0.0, nopts));
  curve.sup_norms.push_back(curve.points.back().u.cwiseAbs().maxCoeff());

  double dt = opts.dt0;
  for (int step = 0; step < opts.max_steps && dt >= opts.dt0 * opts.min_step_ratio; ++step) {
    const SolutionPoint& prev = curve.points.back();
    if (opts.t_stop && prev.t >= *opts.t_stop) break;
    double t_new = prev.t + dt;
    if (opts.t_stop) t_new = std::min(t_new, *opts.t_stop);

    bool exists = false, accept = false;
    SolutionPoint next;
    if (strictly_below(t_new, bound)) {
      try {
        next = newton_solve(p, prev.u, t_new, nopts);
        exists = next.stable;
        accept = exists && next.lambda_min >= (1.0 - opts.max_lambda_drop) * prev.lambda_min;
      } catch (const NumericalError&) {
      }
    }
    if (accept) {
      curve.points.push_back(std::move(next));
      curve.sup_norms.push_back(curve.points.back().u.cwiseAbs().maxCoeff());
    } else {
      if (!exists && (!curve.first_failure_t || t_new < *curve.first_failure_t))
        curve.first_failure_t = t_new;
      dt *= 0.5;
    }
  }

  const bool reached_stop = opts.t_stop && curve.points.back().t >= *opts.t_stop;
  if (!reached_stop) {
    const double l0 = curve.points.front().lambda_min;
    const double ln = curve.points.back().lambda_min;
    if (ln > 0.1 * l0) {
      std::ostringstream msg;
      msg << "step collapsed at t = " << curve.points.back().t << " with lambda_min = " << ln
          << " (initial " << l0 << ", " << curve.points.size() << " points)";
      throw StallBeforeFold(msg.str());
    }
  }
  curve.T0_estimate = curve.points.back().t;
  return curve;
}

FoldResult detect_fold(const Problem& p, const SolutionCurve& curve, const FoldOptions& opts) {
  const auto& pts = curve.points;
  if (pts.size() < 3) throw NoFoldDetected("need at least three curve points");
  const auto n = pts.size();
  const double l0 = pts.front().lambda_min;
  if (!(pts[n - 1].lambda_min < pts[n - 2].lambda_min) ||
      !(pts[n - 1].lambda_min < opts.detect_ratio * l0)) {
    std::ostringstream msg;
    msg << "lambda_min stays at " << pts[n - 1].lambda_min << " (initial " << l0
        << ") on the traced range t <= " << pts[n - 1].t;
    throw NoFoldDetected(msg.str());
  }

  const double ts[3] = {pts[n - 3].t, pts[n - 2].t, pts[n - 1].t};
  const double ys[3] = {std::pow(pts[n - 3].lambda_min, 2), std::pow(pts[n - 2].lambda_min, 2),
                        std::pow(pts[n - 1].lambda_min, 2)};
  FoldResult result;
  result.extrapolated = extrapolate_zero(ts, ys);

  NewtonOptions nopts;
  nopts.tol = opts.tol;
  nopts.max_iter = opts.newton_max_iter;

  SolutionPoint lo = pts.back();
  // A converged point on the other side of the fold has |lambda| below the
  // current one; anything further away is a different branch.
  auto try_solve = [&](double t) -> std::optional<SolutionPoint> {
    try {
      SolutionPoint sp = newton_solve(p, lo.u, t, nopts);
      if (sp.lambda_min >= -1.5 * std::abs(lo.lambda_min)) return sp;
    } catch (const NumericalError&) {
    }
    return std::nullopt;
  };

  double hi;
  if (curve.first_failure_t && *curve.first_failure_t > lo.t) {
    hi = *curve.first_failure_t;
  } else {
    hi = std::isfinite(result.extrapolated) ? result.extrapolated : 2.0 * lo.t;
    for (int k = 0; k < 60; ++k) {
      auto sp = try_solve(hi);
      if (!sp) break;
      lo = *sp;
      hi = lo.t + 2.0 * (hi - pts.back().t);
    }
  }

  for (int k = 0; k < opts.max_bisections && hi - lo.t > opts.t_rel_tol * hi; ++k) {
    const double mid = 0.5 * (lo.t + hi);
    if (auto sp = try_solve(mid))
      lo = *sp;
    else
      hi = mid;
  }
  if (std::abs(lo.lambda_min) > opts.epsilon) {
    std::ostringstream msg;
    msg << "bisection ended at t = " << lo.t << " with lambda_min = " << lo.lambda_min;
    throw NoFoldDetected(msg.str());
  }
  result.T0 = 0.5 * (lo.t + hi);
  result.fold_point = lo;
  return result;
}

double nonexistence_bound(const Problem& p) {
  const ScalarField q23 = p.qnorm2.array().pow(1.0 / 3.0).matrix();
  const double denom = integrate(*p.surface, q23);
  if (!(denom > 0.0)) throw ZeroCubic("integral of ||q||^{2/3} vanishes");
  return std::pow(0.5 * p.surface->area / denom, 1.5);
}

SolutionPoint branch_point(const Problem& p, double t, const ContinuationOptions& opts) {
  if (t < 0.0) throw InvalidArgument("t must be nonnegative");
  ContinuationOptions o = opts;
  o.t_stop = t;
  if (t > 0.0) o.dt0 = std::min(o.dt0, t);
  SolutionCurve curve;
  try {
    curve = trace_curve(p, o);
  } catch (const StallBeforeFold& e) {
    throw BranchUnavailable(e.what());
  }
  if (curve.points.back().t < t) {
    std::ostringstream msg;
    msg << "stable branch ends near t = " << curve.points.back().t << " before requested t = " << t;
    throw BranchUnavailable(msg.str());
  }
  return curve.points.back();
}

} // namespace mlag
