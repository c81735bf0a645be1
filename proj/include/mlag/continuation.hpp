#pragma once

#include <optional>
#include <vector>

#include "mlag/pde.hpp"

namespace mlag {

/// Fold tolerance on lambda_min at the terminal point of the stable branch.
inline constexpr double kFoldEpsilon = 1e-4;

/// Stable branch t -> (u(t), t) from (0, 0) towards the fold.
struct SolutionCurve {
  std::vector<SolutionPoint> points; // strictly increasing t, points[0] = (0, 0)
  std::vector<double> sup_norms;     // ||u||_inf per point
  std::optional<double> first_failure_t; // smallest t where the step was rejected
  double T0_estimate = 0.0;
  std::optional<SolutionPoint> fold_point;
};

struct ContinuationOptions {
  double dt0 = 0.01;
  double tol = 1e-10;
  int newton_max_iter = 40;
  double max_lambda_drop = 0.5; // step halves if lambda_min falls by more
  double min_step_ratio = 1e-4; // stop when dt < dt0 * ratio
  std::optional<double> t_stop; // trace only up to this t
  int max_steps = 100000;
};

/// Natural-parameter continuation in t, warm-started from the previous
/// point. Throws StallBeforeFold if the step collapses while lambda_min is
/// still far from zero.
SolutionCurve trace_curve(const Problem& p, const ContinuationOptions& opts = {});

struct FoldOptions {
  double tol = 1e-10;
  int newton_max_iter = 40;
  double epsilon = kFoldEpsilon;
  double detect_ratio = 0.1; // terminal lambda_min / initial lambda_min must be below
  double t_rel_tol = 1e-12;
  int max_bisections = 200;
};

struct FoldResult {
  double T0 = 0.0;
  SolutionPoint fold_point;
  double extrapolated = 0.0; // quadratic extrapolation before refinement
};

/// Fold location: extrapolate lambda_min^2 (which vanishes linearly at a
/// quadratic fold) to zero from the last three points, then bisect on the
/// existence of a branch solution. Throws NoFoldDetected.
FoldResult detect_fold(const Problem& p, const SolutionCurve& curve, const FoldOptions& opts = {});

/// T = ((area / 2) / integral ||q||^{2/3})^{3/2}; no solution exists for t >= T.
double nonexistence_bound(const Problem& p);

/// Convenience: stable branch point at a given t (continuation from 0).
/// Throws BranchUnavailable when t is beyond the fold.
SolutionPoint branch_point(const Problem& p, double t, const ContinuationOptions& opts = {});

} // namespace mlag
