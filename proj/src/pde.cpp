#include "mlag/pde.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <string>

namespace mlag {

namespace {

void check_size(const Problem& p, const ScalarField& u) {
  if (u.size() != p.size())
    throw DimensionMismatch("field has " + std::to_string(u.size()) + " entries, expected " +
                            std::to_string(p.size()));
}

void check_exponent(const ScalarField& u) {
  if (!u.allFinite()) throw ExponentOverflow("non-finite field");
  if (u.minCoeff() < kExponentFloor)
    throw ExponentOverflow("min u = " + std::to_string(u.minCoeff()) + " below " +
                           std::to_string(kExponentFloor));
}

double weighted_norm(const Eigen::VectorXd& m, const ScalarField& f) {
  return std::sqrt(m.dot(f.cwiseAbs2()));
}

SparseMatrix add_diagonal(const SparseMatrix& K, const Eigen::VectorXd& d) {
  SparseMatrix A = K;
  for (int i = 0; i < d.size(); ++i) A.coeffRef(i, i) += d[i];
  return A;
}

} // namespace

Problem::Problem(SurfacePtr s, CubicDifferential q)
    : surface(std::move(s)), op(laplacian(*surface)), cubic(std::move(q)) {
  if (cubic.surface != surface) throw SurfaceMismatch("cubic differential belongs to another surface");
  qnorm2 = norm_field(cubic).cwiseAbs2();
}

ScalarField residual(const Problem& p, const ScalarField& u, double t) {
  check_size(p, u);
  if (t < 0.0) throw InvalidArgument("t must be nonnegative");
  check_exponent(u);
  const ScalarField Ku = p.op.stiffness * u;
  const ScalarField V = p.potential_v(t);
  const auto eu = u.array().exp();
  return (-Ku.array() / p.mass().array() + 2.0 - 2.0 * eu - V.array() * (-2.0 * u.array()).exp())
      .matrix();
}

LinearizedOperator linearize(const Problem& p, const ScalarField& u, double t) {
  check_size(p, u);
  if (t < 0.0) throw InvalidArgument("t must be nonnegative");
  check_exponent(u);
  const ScalarField V = p.potential_v(t);
  LinearizedOperator L;
  L.potential = (2.0 * (-2.0 * u.array()).exp() * ((3.0 * u.array()).exp() - V.array())).matrix();
  L.mass = p.mass();
  L.matrix = add_diagonal(p.op.stiffness, L.mass.cwiseProduct(L.potential));
  return L;
}

SolutionPoint newton_solve(const Problem& p, const ScalarField& u0, double t,
                           const NewtonOptions& opts) {
  if (!(opts.tol > 0.0)) throw InvalidArgument("Newton tolerance must be positive");
  check_size(p, u0);
  const Eigen::VectorXd& m = p.mass();

  ScalarField u = u0;
  ScalarField F = residual(p, u, t);
  double norm = weighted_norm(m, F);
  int it = 0;
  Eigen::SparseLU<SparseMatrix> lu;
  for (; norm > opts.tol; ++it) {
    if (it >= opts.max_iter)
      throw NonConvergence("no convergence in " + std::to_string(opts.max_iter) +
                           " iterations at t = " + std::to_string(t) +
                           " (residual " + std::to_string(norm) + ")");
    const LinearizedOperator L = linearize(p, u, t);
    lu.compute(L.matrix);
    if (lu.info() != Eigen::Success)
      throw SingularJacobian("factorization failed at t = " + std::to_string(t));
    const ScalarField step = lu.solve(m.cwiseProduct(F));
    if (!step.allFinite()) throw SingularJacobian("non-finite Newton step at t = " + std::to_string(t));

    const double merit = 0.5 * norm * norm;
    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= opts.min_step) {
      const ScalarField trial = u + alpha * step;
      if (trial.allFinite() && trial.minCoeff() >= kExponentFloor) {
        const ScalarField Ft = residual(p, trial, t);
        const double nt = weighted_norm(m, Ft);
        if (0.5 * nt * nt <= (1.0 - 2.0 * opts.armijo * alpha) * merit) {
          u = trial;
          F = Ft;
          norm = nt;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw NonConvergence("line search stalled at t = " + std::to_string(t) + " (residual " +
                           std::to_string(norm) + ")");
  }

  SolutionPoint sp;
  sp.u = u;
  sp.t = t;
  sp.residual_norm = norm;
  sp.iterations = it;
  if (opts.compute_eigenvalue) {
    sp.lambda_min = smallest_eigenvalue(linearize(p, u, t)).first;
    sp.stable = sp.lambda_min > 0.0;
  }
  return sp;
}

std::pair<double, ScalarField> smallest_eigenvalue(const LinearizedOperator& L,
                                                   const EigenOptions& opts) {
  const Eigen::VectorXd& m = L.mass;
  const int n = static_cast<int>(m.size());
  const Eigen::VectorXd minv = m.cwiseInverse();

  // K is positive semidefinite, so min(potential) bounds the spectrum below.
  double shift = L.potential.minCoeff() - 1.0;
  Eigen::SparseLU<SparseMatrix> lu;
  auto factor = [&](double sigma) {
    lu.compute(add_diagonal(L.matrix, -sigma * m));
    if (lu.info() != Eigen::Success) throw EigenFailure("shifted factorization failed");
  };
  factor(shift);

  ScalarField x = ScalarField::Ones(n);
  x /= weighted_norm(m, x);
  double rho = x.dot(L.matrix * x);
  bool refined = false;
  for (int it = 0; it < opts.max_iter; ++it) {
    ScalarField y = lu.solve(m.cwiseProduct(x));
    const double ny = weighted_norm(m, y);
    if (!(ny > 0.0) || !std::isfinite(ny)) throw EigenFailure("inverse iteration broke down");
    x = y / ny;
    if (x.sum() < 0.0) x = -x;
    rho = x.dot(L.matrix * x);
    const ScalarField r = L.matrix * x - rho * m.cwiseProduct(x);
    const double res = std::sqrt(r.dot(minv.cwiseProduct(r)));
    const double scale = std::max(1.0, std::abs(rho));
    if (res <= opts.tol * scale) return {rho, x};
    if (!refined && res < 1e-4 * scale) {
      // |rho - lambda| <= res for some eigenvalue; move the shift just below.
      shift = rho - 10.0 * res;
      factor(shift);
      refined = true;
    }
  }
  throw EigenFailure("inverse iteration did not converge in " + std::to_string(opts.max_iter) +
                     " iterations");
}

} // namespace mlag
