#include "mlag/wp.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <sstream>

namespace mlag {

double area_functional(const SolutionPoint& p, const DiscreteSurface& s) {
  if (p.u.size() != s.num_classes) throw DimensionMismatch("u has the wrong number of classes");
  return -s.lumped_mass.dot(p.u.array().exp().matrix());
}

ScalarField d_operator(const LaplaceOperator& op, const ScalarField& f) {
  if (f.size() != op.mass_diagonal.size()) throw DimensionMismatch("field size does not match surface");
  const SparseMatrix A = op.stiffness + 2.0 * op.mass;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw SolverFailure("K + 2M factorization failed");
  ScalarField x = ldlt.solve(2.0 * op.mass_diagonal.cwiseProduct(f));
  if (ldlt.info() != Eigen::Success || !x.allFinite()) throw SolverFailure("K + 2M solve failed");
  return x;
}

ScalarField d_operator(const DiscreteSurface& s, const ScalarField& f) {
  return d_operator(laplacian(s), f);
}

ScalarField udotdot(const Problem& p) { return -16.0 * d_operator(p.op, p.qnorm2); }

AreaRecord second_variation_check(const Problem& p, double h, const WpOptions& opts) {
  if (!(h > 0.0)) throw InvalidArgument("h must be positive");
  if (!(p.qnorm2.maxCoeff() > 0.0)) throw ZeroCubic("second variation needs q != 0");
  NewtonOptions nopts;
  nopts.tol = opts.tol;
  nopts.max_iter = opts.newton_max_iter;
  const int count = opts.stencil == Stencil::OneSided ? 4 : 3;

  AreaRecord rec;
  ScalarField u = ScalarField::Zero(p.size());
  for (int k = 0; k < count; ++k) {
    const double t = k * h;
    SolutionPoint sp;
    try {
      sp = newton_solve(p, u, t, nopts);
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << "no branch point at t = " << t << ": " << e.what();
      throw BranchUnavailable(msg.str());
    }
    if (!sp.stable) {
      std::ostringstream msg;
      msg << "point at t = " << t << " is not stable (lambda_min = " << sp.lambda_min << ")";
      throw BranchUnavailable(msg.str());
    }
    u = sp.u;
    rec.t.push_back(t);
    rec.area.push_back(area_functional(sp, *p.surface));
  }
  const auto& A = rec.area;
  rec.fd2 = opts.stencil == Stencil::OneSided
                ? (2.0 * A[0] - 5.0 * A[1] + 4.0 * A[2] - A[3]) / (h * h)
                : 2.0 * (A[1] - A[0]) / (h * h);
  rec.adot = (-3.0 * A[0] + 4.0 * A[1] - A[2]) / (2.0 * h);
  rec.exact = 16.0 * integrate(*p.surface, p.qnorm2);
  rec.rel_err = std::abs(rec.fd2 - rec.exact) / std::abs(rec.exact);
  return rec;
}

} // namespace mlag
