#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Core>
#include <Eigen/LU>

namespace mlag {

template <typename Scalar>
using Mat3c = Eigen::Matrix<std::complex<Scalar>, 3, 3>;

/// Frame matrix; F^dagger eta F = eta and det F = 1 up to the recorded defect.
using Su21Matrix = Mat3c<double>;

/// eta = diag(1, 1, -1), the form <v, w> = v1 w1* + v2 w2* - v3 w3*.
template <typename Scalar>
Mat3c<Scalar> eta() {
  Mat3c<Scalar> e = Mat3c<Scalar>::Zero();
  e(0, 0) = e(1, 1) = Scalar(1);
  e(2, 2) = Scalar(-1);
  return e;
}

/// (max |F^dagger eta F - eta|, |det F - 1|).
template <typename Scalar>
std::pair<Scalar, Scalar> su21_defect(const Mat3c<Scalar>& F) {
  const Mat3c<Scalar> e = eta<Scalar>();
  const Scalar unit = (F.adjoint() * e * F - e).cwiseAbs().maxCoeff();
  const Scalar det = std::abs(F.determinant() - std::complex<Scalar>(1));
  return {unit, det};
}

/// F^{-1} F_z and F^{-1} F_zbar for the metric 2 s^2 |dz|^2 and cubic q.
/// ls_z is (log s)_z; (log s)_zbar is its conjugate since s is real.
template <typename Scalar>
std::pair<Mat3c<Scalar>, Mat3c<Scalar>> maurer_cartan(Scalar s, std::complex<Scalar> ls_z,
                                                       std::complex<Scalar> q) {
  using C = std::complex<Scalar>;
  const C ls_zbar = std::conj(ls_z);
  const Scalar is2 = Scalar(1) / (s * s);
  Mat3c<Scalar> A = Mat3c<Scalar>::Zero();
  A(0, 0) = ls_z;
  A(0, 2) = s;
  A(1, 0) = -q * is2;
  A(1, 1) = -ls_z;
  A(2, 1) = s;
  Mat3c<Scalar> B = Mat3c<Scalar>::Zero();
  B(0, 0) = -ls_zbar;
  B(0, 1) = std::conj(q) * is2;
  B(1, 1) = ls_zbar;
  B(1, 2) = s;
  B(2, 0) = s;
  return {A, B};
}

/// Rows: II(E1,E1), II(E1,E2), II(E2,E2) in the basis (iE1, iE2).
template <typename Scalar>
struct SecondFundamentalForm {
  Eigen::Matrix<Scalar, 3, 2> components;

  Eigen::Matrix<Scalar, 1, 2> trace() const { return components.row(0) + components.row(2); }
};

template <typename Scalar>
SecondFundamentalForm<Scalar> second_fundamental_form(Scalar s, std::complex<Scalar> q) {
  using std::sqrt;
  const Scalar k = Scalar(1) / (sqrt(Scalar(2)) * s * s * s);
  const Scalar re = q.real(), im = q.imag();
  SecondFundamentalForm<Scalar> ii;
  ii.components << -k * im, -k * re,
                   -k * re,  k * im,
                    k * im,  k * re;
  return ii;
}

} // namespace mlag
