#pragma once

#include <vector>

#include <Eigen/Core>

namespace mlag {

/// Piecewise quintic on [0, 1] in local coordinates per piece.
struct QuinticBlend {
  std::vector<double> knots;                           // 0 = k_0 < ... < k_P = 1
  std::vector<Eigen::Matrix<double, 6, 1>> coeffs;     // monomial coeffs in (s - k_i) / h_i
  std::vector<double> piece_integrals;                 // integral over each piece

  double value(double s) const;
  double derivative(double s) const;
  double integral_to(double s) const; // integral from 0 to s
};

/// Cutoff nonlinearities of the modified equation
///   -Delta u + V u - (f1(u) + V f2(u)) = 0,
/// with antiderivatives F1, F2. On s <= 0 they coincide with the original
/// nonlinearity, on s > 1 they have polynomial growth, and on (0, 1) a
/// quintic blend keeps f1 < 0 and f2 < 0.
struct CutoffPair {
  double theta = 3.0;
  QuinticBlend blend1;
  QuinticBlend blend2;

  double f1(double s) const;
  double f2(double s) const;
  double df1(double s) const;
  double df2(double s) const;
  double F1(double s) const;
  double F2(double s) const;
};

/// theta > 2. The blends match value and slope at both ends, curvature at 0,
/// and the integral that makes F1, F2 continuous with their closed forms.
/// Throws BlendSignViolation when neither a single quintic nor a two-piece
/// blend with a midpoint knot is negative on (0, 1).
CutoffPair build_cutoffs(double theta);

/// max over a grid of F_j(s) - (s / theta) f_j(s); finite for a valid pair.
struct GrowthConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};
GrowthConstants growth_constants(const CutoffPair& cp, double s_min = -50.0, double s_max = 50.0,
                                 int samples = 20001);

} // namespace mlag
