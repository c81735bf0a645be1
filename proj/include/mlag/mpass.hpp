#pragma once

#include "mlag/continuation.hpp"
#include "mlag/cutoffs.hpp"
#include "mlag/pde.hpp"

namespace mlag {

/// Inner product <f, g>_V = integral of grad f . grad g + V f g.
struct VNorm {
  ScalarField V;
  SparseMatrix gram; // K + M diag(V)
};

VNorm make_vnorm(const Problem& p, double t);

/// ||u||_V. Throws DegenerateNorm when integral V = 0.
double v_norm(const Problem& p, const ScalarField& u, double t);

/// Modified functional
///   (1/2) integral {|grad u|^2 + V u^2} - integral {F1(u) + V F2(u)}.
double functional_value(const Problem& p, const ScalarField& u, double t, const CutoffPair& cp);

/// Weak gradient K u + M V u - M (f1(u) + V f2(u)).
ScalarField functional_gradient_weak(const Problem& p, const ScalarField& u, double t,
                                     const CutoffPair& cp);

/// M-representation of the gradient: -Delta u + V u - f1(u) - V f2(u).
ScalarField functional_gradient(const Problem& p, const ScalarField& u, double t,
                                const CutoffPair& cp);

/// Generalized eigenvalue range of (gram_V, gram_H1) and the equivalence
/// constant C = max(lambda_max, 1 / lambda_min). Dense; for desk-size meshes.
struct NormEquivalence {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double constant = 0.0;
};
NormEquivalence norm_equivalence(const Problem& p, double t);

struct MountainPassOptions {
  int nodes = 20;
  int max_path_iter = 4000;
  double switch_tol = 1e-3;  // hand over to Newton below this V-dual gradient
  double step = 0.5;         // descent step in the K + M (V + 2) metric
  double max_step = 0.25;    // sup-norm bound on one node update
  double tol = 1e-10;        // Newton tolerance on the gradient
  int newton_max_iter = 60;
  int max_retries = 2;       // node doubling after PathCollapse
  double epsilon = kFoldEpsilon;
};

struct MountainPassResult {
  SolutionPoint point;        // u2 with residual of the structure equation
  double gradient_norm = 0.0; // ||grad F(u2)||_M
  double vnorm_separation = 0.0;
  double energy = 0.0;
  double energy_stable = 0.0;
  double endpoint_level = 0.0; // constant w with F(w) < F(u_stable)
  int path_iterations = 0;
  int nodes = 0;
};

/// Second critical point at the same t as a stable branch point: discretized
/// path from u_stable to a low constant, climbing-string relaxation (nodes
/// descend normal to the path, the highest node climbs along it), Newton
/// polish, then verification that the point solves the structure equation,
/// is non-positive and not stable.
MountainPassResult find_mountain_pass(const Problem& p, const SolutionPoint& stable, double t,
                                      const CutoffPair& cp, const MountainPassOptions& opts = {});

} // namespace mlag
