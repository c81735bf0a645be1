#include "mlag/mpass.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace mlag {

namespace {

SparseMatrix add_diagonal(const SparseMatrix& K, const Eigen::VectorXd& d) {
  SparseMatrix A = K;
  for (int i = 0; i < d.size(); ++i) A.coeffRef(i, i) += d[i];
  return A;
}

void require_positive_v(const Problem& p, const ScalarField& V) {
  if (!(integrate(*p.surface, V) > 0.0))
    throw DegenerateNorm("integral of V = 16 t^2 ||q||^2 vanishes (t = 0 or q = 0)");
}

bool in_range(const ScalarField& u) { return u.allFinite() && u.minCoeff() >= kExponentFloor; }

// Dual V-norm of a weak gradient, sqrt(g^T G^{-1} g), with d = G^{-1} g.
double dual_norm(const ScalarField& g, const ScalarField& d) { return std::sqrt(std::max(0.0, g.dot(d))); }

double gradient_m_norm(const Problem& p, const ScalarField& g) {
  return std::sqrt(g.dot(g.cwiseQuotient(p.mass())));
}

// Newton on the weak gradient of the modified functional.
std::optional<ScalarField> polish(const Problem& p, ScalarField u, double t, const CutoffPair& cp,
                                  const MountainPassOptions& opts) {
  const ScalarField V = p.potential_v(t);
  const Eigen::VectorXd& m = p.mass();
  ScalarField g = functional_gradient_weak(p, u, t, cp);
  double gn = gradient_m_norm(p, g);
  Eigen::SparseLU<SparseMatrix> lu;
  for (int it = 0; it < opts.newton_max_iter; ++it) {
    if (gn <= opts.tol) return u;
    Eigen::VectorXd curv(u.size());
    for (int i = 0; i < u.size(); ++i) curv[i] = V[i] - cp.df1(u[i]) - V[i] * cp.df2(u[i]);
    lu.compute(add_diagonal(p.op.stiffness, m.cwiseProduct(curv)));
    if (lu.info() != Eigen::Success) return std::nullopt;
    const ScalarField step = -lu.solve(g);
    if (!step.allFinite()) return std::nullopt;
    double alpha = 1.0;
    bool accepted = false;
    while (alpha > 1e-10) {
      const ScalarField trial = u + alpha * step;
      if (in_range(trial)) {
        const ScalarField gt = functional_gradient_weak(p, trial, t, cp);
        const double nt = gradient_m_norm(p, gt);
        if (nt * nt <= (1.0 - 2e-4 * alpha) * gn * gn) {
          u = trial;
          g = gt;
          gn = nt;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) return std::nullopt;
  }
  if (gn <= opts.tol) return u;
  return std::nullopt;
}

struct PathOutcome {
  ScalarField top;
  int iterations = 0;
  double gradient = 0.0; // dual norm at the climbing node
};

// Nodes between a and b (inclusive) redistributed at equal arclength in the
// gram metric along the current polyline.
void redistribute(std::vector<ScalarField>& path, int a, int b, const SparseMatrix& gram) {
  if (b - a < 2) return;
  std::vector<double> arc(b - a + 1, 0.0);
  for (int i = a + 1; i <= b; ++i) {
    const ScalarField d = path[i] - path[i - 1];
    arc[i - a] = arc[i - a - 1] + std::sqrt(std::max(0.0, d.dot(gram * d)));
  }
  const double total = arc.back();
  if (!(total > 0.0)) return;
  std::vector<ScalarField> fresh(path.begin() + a, path.begin() + b + 1);
  int seg = 0;
  for (int i = a + 1; i < b; ++i) {
    const double target = total * (i - a) / (b - a);
    while (seg + 1 < b - a && arc[seg + 1] < target) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double c = len > 0.0 ? (target - arc[seg]) / len : 0.0;
    fresh[i - a] = (1.0 - c) * path[a + seg] + c * path[a + seg + 1];
  }
  for (int i = a + 1; i < b; ++i) path[i] = fresh[i - a];
}

// Climbing string: every interior node descends along the gradient
// component normal to the path, the highest node climbs along the tangent,
// and the nodes on each side of it are kept at equal arclength.
PathOutcome deform_path(const Problem& p, const ScalarField& u_s, const ScalarField& w, double t,
                        const CutoffPair& cp, const SparseMatrix& gram,
                        const Eigen::SimplicialLDLT<SparseMatrix>& gram_solver,
                        const Eigen::SimplicialLDLT<SparseMatrix>& precond, int nodes,
                        const MountainPassOptions& opts) {
  std::vector<ScalarField> path(nodes);
  std::vector<double> energy(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double s = double(i) / (nodes - 1);
    path[i] = (1.0 - s) * u_s + s * w;
    energy[i] = functional_value(p, path[i], t, cp);
  }

  PathOutcome out;
  int iter = 0;
  int top = 1;
  for (; iter < opts.max_path_iter; ++iter) {
    top = static_cast<int>(std::max_element(energy.begin() + 1, energy.end() - 1) - energy.begin());
    const ScalarField g_top = functional_gradient_weak(p, path[top], t, cp);
    out.gradient = dual_norm(g_top, gram_solver.solve(g_top));
    if (out.gradient < opts.switch_tol) break;

    std::vector<ScalarField> moved(path);
    for (int i = 1; i + 1 < nodes; ++i) {
      const ScalarField g = i == top ? g_top : functional_gradient_weak(p, path[i], t, cp);
      const ScalarField d = precond.solve(g);
      const ScalarField tangent = path[i + 1] - path[i - 1];
      const ScalarField gt = gram * tangent;
      const double tt = tangent.dot(gt);
      ScalarField step = d;
      if (tt > 0.0) step -= (i == top ? 2.0 : 1.0) * (gt.dot(d) / tt) * tangent;
      const double sup = step.cwiseAbs().maxCoeff();
      if (!(sup > 0.0)) continue;
      const double alpha = std::min(opts.step, opts.max_step / sup);
      ScalarField trial = path[i] - alpha * step;
      if (in_range(trial)) moved[i] = std::move(trial);
    }
    path = std::move(moved);
    redistribute(path, 0, top, gram);
    redistribute(path, top, nodes - 1, gram);
    for (int i = 1; i + 1 < nodes; ++i) energy[i] = functional_value(p, path[i], t, cp);
  }
  out.top = path[top];
  out.iterations = iter;
  return out;
}

} // namespace

VNorm make_vnorm(const Problem& p, double t) {
  VNorm n;
  n.V = p.potential_v(t);
  n.gram = add_diagonal(p.op.stiffness, p.mass().cwiseProduct(n.V));
  return n;
}

double v_norm(const Problem& p, const ScalarField& u, double t) {
  const VNorm n = make_vnorm(p, t);
  require_positive_v(p, n.V);
  if (u.size() != p.size()) throw DimensionMismatch("field size does not match surface");
  return std::sqrt(std::max(0.0, u.dot(n.gram * u)));
}

double functional_value(const Problem& p, const ScalarField& u, double t, const CutoffPair& cp) {
  if (u.size() != p.size()) throw DimensionMismatch("field size does not match surface");
  const ScalarField V = p.potential_v(t);
  const Eigen::VectorXd& m = p.mass();
  double quad = u.dot(p.op.stiffness * u);
  double pot = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    quad += m[i] * V[i] * u[i] * u[i];
    pot += m[i] * (cp.F1(u[i]) + V[i] * cp.F2(u[i]));
  }
  return 0.5 * quad - pot;
}

ScalarField functional_gradient_weak(const Problem& p, const ScalarField& u, double t,
                                     const CutoffPair& cp) {
  if (u.size() != p.size()) throw DimensionMismatch("field size does not match surface");
  const ScalarField V = p.potential_v(t);
  const Eigen::VectorXd& m = p.mass();
  ScalarField g = p.op.stiffness * u;
  for (int i = 0; i < u.size(); ++i)
    g[i] += m[i] * (V[i] * u[i] - cp.f1(u[i]) - V[i] * cp.f2(u[i]));
  return g;
}

ScalarField functional_gradient(const Problem& p, const ScalarField& u, double t,
                                const CutoffPair& cp) {
  return functional_gradient_weak(p, u, t, cp).cwiseQuotient(p.mass());
}

NormEquivalence norm_equivalence(const Problem& p, double t) {
  const VNorm n = make_vnorm(p, t);
  require_positive_v(p, n.V);
  const Eigen::MatrixXd Gv(n.gram);
  const Eigen::MatrixXd Gh(add_diagonal(p.op.stiffness, p.mass()));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Gv, Gh, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenFailure("dense generalized eigensolver failed");
  NormEquivalence out;
  out.lambda_min = es.eigenvalues().minCoeff();
  out.lambda_max = es.eigenvalues().maxCoeff();
  out.constant = std::max(out.lambda_max, 1.0 / out.lambda_min);
  return out;
}

MountainPassResult find_mountain_pass(const Problem& p, const SolutionPoint& stable, double t,
                                      const CutoffPair& cp, const MountainPassOptions& opts) {
  const VNorm vn = make_vnorm(p, t);
  require_positive_v(p, vn.V);
  if (!stable.stable) throw InvalidArgument("starting point is not on the stable branch");
  if (std::abs(stable.t - t) > 1e-12 * std::max(1.0, t))
    throw InvalidArgument("stable point and mountain-pass parameter differ");
  if (opts.nodes < 3) throw InvalidArgument("mountain pass path needs at least three nodes");

  const ScalarField& u_s = stable.u;
  const double f_s = functional_value(p, u_s, t, cp);

  // Low endpoint: F(k) -> -infinity as k -> -infinity.
  double k = std::min(-1.0, u_s.minCoeff() - 1.0);
  const double margin = 1e-3 * (1.0 + std::abs(f_s));
  while (functional_value(p, ScalarField::Constant(p.size(), k), t, cp) >= f_s - margin) {
    k *= 1.5;
    if (k < kExponentFloor + 1.0)
      throw VerificationFailure("no constant below the stable level within the exponent range");
  }
  const ScalarField w = ScalarField::Constant(p.size(), k);

  Eigen::SimplicialLDLT<SparseMatrix> gram_solver(vn.gram);
  if (gram_solver.info() != Eigen::Success) throw SolverFailure("V-gram factorization failed");
  // descent metric K + M (V + 2): bounded where V vanishes
  Eigen::SimplicialLDLT<SparseMatrix> precond(
      add_diagonal(p.op.stiffness, p.mass().cwiseProduct((vn.V.array() + 2.0).matrix())));
  if (precond.info() != Eigen::Success) throw SolverFailure("preconditioner factorization failed");

  int nodes = opts.nodes;
  std::string last_problem;
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt, nodes *= 2) {
    const PathOutcome path = deform_path(p, u_s, w, t, cp, vn.gram, gram_solver, precond, nodes, opts);
    const auto u2 = polish(p, path.top, t, cp, opts);
    if (!u2) {
      last_problem = "Newton polish from the path maximum did not converge";
      continue;
    }
    const ScalarField diff = *u2 - u_s;
    const double sep = std::sqrt(std::max(0.0, diff.dot(vn.gram * diff)));
    if (sep <= 10.0 * opts.tol) {
      last_problem = "path collapsed onto the stable solution";
      continue;
    }
    if (u2->maxCoeff() > kTolPositive) {
      std::ostringstream msg;
      msg << "critical point has max u = " << u2->maxCoeff() << " > 0";
      throw VerificationFailure(msg.str());
    }

    MountainPassResult r;
    r.point.u = *u2;
    r.point.t = t;
    r.point.residual_norm = l2_norm(*p.surface, residual(p, *u2, t));
    r.point.lambda_min = smallest_eigenvalue(linearize(p, *u2, t)).first;
    r.point.stable = r.point.lambda_min > 0.0;
    r.gradient_norm = gradient_m_norm(p, functional_gradient_weak(p, *u2, t, cp));
    r.vnorm_separation = sep;
    r.energy = functional_value(p, *u2, t, cp);
    r.energy_stable = f_s;
    r.endpoint_level = k;
    r.path_iterations = path.iterations;
    r.nodes = nodes;
    if (r.point.residual_norm > 10.0 * opts.tol) {
      std::ostringstream msg;
      msg << "structure-equation residual " << r.point.residual_norm << " exceeds " << 10.0 * opts.tol;
      throw VerificationFailure(msg.str());
    }
    if (r.point.lambda_min > opts.epsilon) {
      std::ostringstream msg;
      msg << "second critical point is stable (lambda_min = " << r.point.lambda_min << ")";
      throw VerificationFailure(msg.str());
    }
    return r;
  }
  throw PathCollapse(last_problem + " after " + std::to_string(opts.max_retries + 1) + " attempts");
}

} // namespace mlag
