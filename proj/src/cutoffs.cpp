#include "mlag/cutoffs.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mlag/errors.hpp"

namespace mlag {

namespace {

struct EndData {
  double v0, d0, dd0; // value, slope, curvature at 0
  double v1, d1;      // value, slope at 1
  double integral;    // integral over [0, 1]
};

// Row of the constraint matrix for derivative `der` of piece k at local x.
Eigen::VectorXd basis_row(int pieces, int k, double x, int der) {
  const double h = 1.0 / pieces;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(6 * pieces);
  for (int j = der; j < 6; ++j) {
    double coef = 1.0;
    for (int m = 0; m < der; ++m) coef *= j - m;
    r[6 * k + j] = coef * std::pow(x, j - der) / std::pow(h, der);
  }
  return r;
}

QuinticBlend fit_blend(const EndData& e, int pieces) {
  const int n = 6 * pieces;
  const double h = 1.0 / pieces;
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  auto add = [&](Eigen::VectorXd r, double b) {
    rows.push_back(std::move(r));
    rhs.push_back(b);
  };
  add(basis_row(pieces, 0, 0.0, 0), e.v0);
  add(basis_row(pieces, 0, 0.0, 1), e.d0);
  add(basis_row(pieces, 0, 0.0, 2), e.dd0);
  add(basis_row(pieces, pieces - 1, 1.0, 0), e.v1);
  add(basis_row(pieces, pieces - 1, 1.0, 1), e.d1);
  for (int k = 0; k + 1 < pieces; ++k)
    for (int d = 0; d < 3; ++d) add(basis_row(pieces, k, 1.0, d) - basis_row(pieces, k + 1, 0.0, d), 0.0);
  Eigen::VectorXd integ = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < pieces; ++k)
    for (int j = 0; j < 6; ++j) integ[6 * k + j] = h / (j + 1);
  add(integ, e.integral);

  const int m = static_cast<int>(rows.size());
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    A.row(i) = rows[i].transpose();
    b[i] = rhs[i];
  }

  Eigen::VectorXd c;
  if (m == n) {
    c = A.fullPivLu().solve(b);
  } else {
    // Least curvature: minimize the integral of p''^2 subject to A c = b.
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < pieces; ++k)
      for (int i = 2; i < 6; ++i)
        for (int j = 2; j < 6; ++j)
          Q(6 * k + i, 6 * k + j) = double(i * (i - 1) * j * (j - 1)) / (i + j - 3) / std::pow(h, 3);
    Eigen::MatrixXd KKT = Eigen::MatrixXd::Zero(n + m, n + m);
    KKT.topLeftCorner(n, n) = Q;
    KKT.topRightCorner(n, m) = A.transpose();
    KKT.bottomLeftCorner(m, n) = A;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n + m);
    r.tail(m) = b;
    c = KKT.fullPivLu().solve(r).head(n);
  }

  QuinticBlend blend;
  for (int k = 0; k <= pieces; ++k) blend.knots.push_back(k * h);
  for (int k = 0; k < pieces; ++k) {
    blend.coeffs.emplace_back(c.segment<6>(6 * k));
    double I = 0.0;
    for (int j = 0; j < 6; ++j) I += h * c[6 * k + j] / (j + 1);
    blend.piece_integrals.push_back(I);
  }
  return blend;
}

bool negative_inside(const QuinticBlend& b) {
  const int samples = 4000;
  for (int i = 1; i < samples; ++i)
    if (!(b.value(double(i) / samples) < 0.0)) return false;
  return true;
}

QuinticBlend negative_blend(const EndData& e, const char* name) {
  for (int pieces : {1, 2}) {
    QuinticBlend b = fit_blend(e, pieces);
    if (negative_inside(b)) return b;
  }
  throw BlendSignViolation(std::string(name) + " blend is not negative on (0, 1)");
}

int piece_of(const QuinticBlend& b, double s) {
  const int pieces = static_cast<int>(b.coeffs.size());
  return std::clamp(static_cast<int>(s * pieces), 0, pieces - 1);
}

} // namespace

double QuinticBlend::value(double s) const {
  const int k = piece_of(*this, s);
  const double h = knots[k + 1] - knots[k];
  const double x = (s - knots[k]) / h;
  const auto& c = coeffs[k];
  return c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * (c[4] + x * c[5]))));
}

double QuinticBlend::derivative(double s) const {
  const int k = piece_of(*this, s);
  const double h = knots[k + 1] - knots[k];
  const double x = (s - knots[k]) / h;
  const auto& c = coeffs[k];
  return (c[1] + x * (2 * c[2] + x * (3 * c[3] + x * (4 * c[4] + x * 5 * c[5])))) / h;
}

double QuinticBlend::integral_to(double s) const {
  const int k = piece_of(*this, s);
  double acc = 0.0;
  for (int i = 0; i < k; ++i) acc += piece_integrals[i];
  const double h = knots[k + 1] - knots[k];
  const double x = (s - knots[k]) / h;
  const auto& c = coeffs[k];
  double part = 0.0;
  for (int j = 5; j >= 0; --j) part = part * x + c[j] / (j + 1);
  return acc + h * x * part;
}

double CutoffPair::f1(double s) const {
  if (s <= 0.0) return 2.0 - 2.0 * std::exp(s);
  if (s > 1.0) return -theta * std::pow(s, theta - 1.0);
  return blend1.value(s);
}

double CutoffPair::df1(double s) const {
  if (s <= 0.0) return -2.0 * std::exp(s);
  if (s > 1.0) return -theta * (theta - 1.0) * std::pow(s, theta - 2.0);
  return blend1.derivative(s);
}

double CutoffPair::F1(double s) const {
  if (s <= 0.0) return 2.0 * s - 2.0 * std::exp(s) + 2.0;
  if (s > 1.0) return -std::pow(s, theta);
  return blend1.integral_to(s);
}

double CutoffPair::f2(double s) const {
  if (s <= 0.0) return s - std::exp(-2.0 * s);
  if (s > 1.0) return 0.0;
  return blend2.value(s);
}

double CutoffPair::df2(double s) const {
  if (s <= 0.0) return 1.0 + 2.0 * std::exp(-2.0 * s);
  if (s > 1.0) return 0.0;
  return blend2.derivative(s);
}

double CutoffPair::F2(double s) const {
  if (s <= 0.0) return 0.5 * (s * s + std::exp(-2.0 * s));
  if (s > 1.0) return 0.0;
  return 0.5 + blend2.integral_to(s);
}

CutoffPair build_cutoffs(double theta) {
  if (!(theta > 2.0)) throw InvalidArgument("theta must exceed 2");
  CutoffPair cp;
  cp.theta = theta;
  // F1(0) = 0 and F1(1) = -1; F2(0) = 1/2 and F2(1) = 0.
  cp.blend1 = negative_blend({0.0, -2.0, -2.0, -theta, -theta * (theta - 1.0), -1.0}, "f1");
  cp.blend2 = negative_blend({-1.0, 3.0, -4.0, 0.0, 0.0, -0.5}, "f2");
  return cp;
}

GrowthConstants growth_constants(const CutoffPair& cp, double s_min, double s_max, int samples) {
  GrowthConstants g{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < samples; ++i) {
    const double s = s_min + (s_max - s_min) * i / (samples - 1);
    g.c1 = std::max(g.c1, cp.F1(s) - s / cp.theta * cp.f1(s));
    g.c2 = std::max(g.c2, cp.F2(s) - s / cp.theta * cp.f2(s));
  }
  return g;
}

} // namespace mlag
