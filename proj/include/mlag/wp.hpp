#pragma once

#include <vector>

#include "mlag/pde.hpp"

namespace mlag {

/// A(u) = -integral e^u dA.
double area_functional(const SolutionPoint& p, const DiscreteSurface& s);

/// D f = -2 (Delta - 2)^{-1} f, i.e. the solution x of (K + 2M) x = 2 M f.
ScalarField d_operator(const DiscreteSurface& s, const ScalarField& f);
ScalarField d_operator(const LaplaceOperator& op, const ScalarField& f);

/// Second t-derivative of u at t = 0: -16 D(||q||^2).
ScalarField udotdot(const Problem& p);

enum class Stencil { Centered, OneSided };

struct WpOptions {
  Stencil stencil = Stencil::Centered;
  double tol = 1e-11;
  int newton_max_iter = 40;
};

struct AreaRecord {
  std::vector<double> t;    // 0, h, 2h (, 3h)
  std::vector<double> area; // A(t)
  double fd2 = 0.0;         // second difference at 0
  double exact = 0.0;       // 16 integral ||q||^2
  double rel_err = 0.0;
  double adot = 0.0;        // one-sided first difference at 0
};

/// Canonical branch at t = k h (k = 0..3), warm-started from the previous
/// point. Centered: A is even in t, so A''(0) ~ 2 (A(h) - A(0)) / h^2.
/// One-sided: (2 A0 - 5 A1 + 4 A2 - A3) / h^2. adot uses
/// (-3 A0 + 4 A1 - A2) / (2h). Throws BranchUnavailable when Newton fails or
/// the point is not stable.
AreaRecord second_variation_check(const Problem& p, double h, const WpOptions& opts = {});

} // namespace mlag
