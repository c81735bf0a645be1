#pragma once

#include <cmath>
#include <utility>

#include "mlag/cubic.hpp"
#include "mlag/errors.hpp"
#include "mlag/surface.hpp"

namespace mlag {

/// Fixed data of the structure equation on one surface: the operators and
/// ||q||^2. The equation for the ray t q is
///   Delta u + 2 - 2 e^u - 16 t^2 ||q||^2 e^{-2u} = 0.
struct Problem {
  SurfacePtr surface;
  LaplaceOperator op;
  CubicDifferential cubic;
  ScalarField qnorm2;

  Problem(SurfacePtr s, CubicDifferential q);

  int size() const { return surface->num_classes; }
  const Eigen::VectorXd& mass() const { return op.mass_diagonal; }
  /// V = 16 t^2 ||q||^2
  ScalarField potential_v(double t) const { return 16.0 * t * t * qnorm2; }
};

/// Lower bound of the exponent range; fields below it are rejected.
inline constexpr double kExponentFloor = -50.0;
/// Positivity tolerance for the discrete maximum principle (u <= 0).
inline constexpr double kTolPositive = 1e-8;

struct SolutionPoint {
  ScalarField u;
  double t = 0.0;
  double residual_norm = 0.0;
  double lambda_min = 0.0;
  bool stable = false;
  int iterations = 0;
};

/// Symmetric K + M diag(2 e^{-2u} (e^{3u} - 16 t^2 ||q||^2)); generalized
/// against M. The Jacobian of residual() is -M^{-1} * matrix.
struct LinearizedOperator {
  SparseMatrix matrix;
  Eigen::VectorXd potential; // per class
  Eigen::VectorXd mass;
};

/// Strong-form residual M^{-1}(-K u) + 2 - 2 e^u - V e^{-2u}.
/// Throws ExponentOverflow if min u < kExponentFloor.
ScalarField residual(const Problem& p, const ScalarField& u, double t);

LinearizedOperator linearize(const Problem& p, const ScalarField& u, double t);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double armijo = 1e-4;
  double min_step = 1e-10;
  bool compute_eigenvalue = true;
};

/// Damped Newton on residual(., t) = 0 with Armijo backtracking on
/// (1/2)||F||_M^2. Throws NonConvergence or SingularJacobian.
SolutionPoint newton_solve(const Problem& p, const ScalarField& u0, double t,
                           const NewtonOptions& opts = {});

struct EigenOptions {
  double tol = 1e-9;
  int max_iter = 500;
};

/// Smallest generalized eigenpair of (L, M) by shifted inverse iteration
/// followed by Rayleigh-quotient refinement. The eigenvector is M-normalized.
std::pair<double, ScalarField> smallest_eigenvalue(const LinearizedOperator& L,
                                                   const EigenOptions& opts = {});

/// H(a) = a (log a)^2 / 4 and its Legendre transform
/// H*(b) = e^{-1 + sqrt(1 + 4b)} (-1 + sqrt(1 + 4b)) / 2, so a b <= H + H*.
template <typename Scalar>
std::pair<Scalar, Scalar> legendre_pair(Scalar a, Scalar b) {
  using std::exp;
  using std::log;
  using std::sqrt;
  if (!(a >= Scalar(1)) || !(b >= Scalar(0)))
    throw InvalidArgument("legendre_pair needs a >= 1 and b >= 0");
  const Scalar la = log(a);
  const Scalar H = a * la * la / Scalar(4);
  const Scalar r = sqrt(Scalar(1) + Scalar(4) * b);
  const Scalar Hstar = exp(r - Scalar(1)) * (r - Scalar(1)) / Scalar(2);
  return {H, Hstar};
}

} // namespace mlag
