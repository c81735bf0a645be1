#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mlag/continuation.hpp"
#include "mlag/errors.hpp"
#include "mlag/frame.hpp"

using namespace mlag;

TEST_CASE("su21 defect examples") {
  CHECK(su21_defect<double>(Su21Matrix::Identity()) == std::pair<double, double>(0.0, 0.0));
  Su21Matrix R = Su21Matrix::Zero();
  R(0, 0) = std::polar(1.0, 0.4);
  R(1, 1) = std::polar(1.0, -0.4);
  R(2, 2) = 1.0;
  const auto [u, d] = su21_defect(R);
  CHECK(u < 1e-15);
  CHECK(d < 1e-15);
  const auto [u2, d2] = su21_defect<double>(2.0 * Su21Matrix::Identity());
  CHECK(u2 == 3.0);
  CHECK(d2 == 7.0);
}

TEST_CASE("Maurer-Cartan matrices") {
  const auto [A0, B0] = maurer_cartan(1.5, Complex(0.0, 0.0), Complex(0.0, 0.0));
  CHECK(A0(0, 2) == Complex(1.5, 0.0));
  CHECK(A0(2, 1) == Complex(1.5, 0.0));
  CHECK(A0.cwiseAbs().sum() == doctest::Approx(3.0));

  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  const Su21Matrix e = eta<double>();
  for (int i = 0; i < 100; ++i) {
    const double s = std::exp(nd(rng));
    const Complex lz(nd(rng), nd(rng)), q(nd(rng), nd(rng));
    const auto [A, B] = maurer_cartan(s, lz, q);
    CHECK(std::abs(A.trace()) == 0.0);
    CHECK(std::abs(B.trace()) == 0.0);
    // alpha(v) lies in su(2,1) for every real direction v
    CHECK((A.adjoint() * e + e * B).cwiseAbs().maxCoeff() < 1e-14 * (1.0 + std::norm(q) / (s * s)));
    // B mirrors A under q -> conj(q), z <-> zbar
    const auto [Ac, Bc] = maurer_cartan(s, std::conj(lz), std::conj(q));
    CHECK(B(0, 1) == -Ac(1, 0));
    CHECK(B(0, 0) == Ac(1, 1));
  }
}

TEST_CASE("second fundamental form") {
  const auto zero = second_fundamental_form(2.0, Complex(0.0, 0.0));
  CHECK(zero.components.cwiseAbs().maxCoeff() == 0.0);
  const auto ii = second_fundamental_form(1.0, Complex(0.0, 1.0));
  CHECK(ii.components(0, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(ii.components(0, 1) == 0.0);
  std::mt19937 rng(9);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 1000; ++i) {
    const double s = std::exp(nd(rng));
    const Complex q(nd(rng), nd(rng));
    const auto f = second_fundamental_form(s, q);
    CHECK(f.trace().cwiseAbs().maxCoeff() == 0.0);
    // s^{-3} scaling and linearity in q
    const auto g = second_fundamental_form(2.0 * s, 3.0 * q);
    CHECK((g.components - f.components * (3.0 / 8.0)).cwiseAbs().maxCoeff() < 1e-12 * f.components.cwiseAbs().maxCoeff() + 1e-300);
  }
}

TEST_CASE("s from u") {
  const auto torus = build_flat_torus(4, 1.0, 4.0);
  const auto s0 = s_from_u(ScalarField::Zero(16), *torus);
  CHECK(s0[0] == doctest::Approx(std::sqrt(2.0)));
  const auto flat = build_flat_torus(4, 1.0, 1.0);
  const auto s1 = s_from_u(ScalarField::Constant(16, std::log(2.0 / 3.0)), *flat);
  CHECK(s1[5] == doctest::Approx(std::sqrt(1.0 / 3.0)));
  const auto oct = build_genus2_octagon(1);
  CHECK(s_from_u(ScalarField::Zero(oct->num_classes), *oct)[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(s_from_u(ScalarField::Zero(3), *flat), DimensionMismatch);
}

TEST_CASE("trivial frame stays in SU(2,1) at fourth order") {
  const auto f = trivial_disk_sampler();
  const Complex end = std::polar(std::tanh(0.5), 0.9);
  CHECK(disk_distance(0.0, end) == doctest::Approx(1.0));
  std::vector<double> d;
  for (double h : {0.04, 0.02, 0.01}) {
    FrameOptions o;
    o.step = h;
    const FrameSheet sh = integrate_frame(*f, {0.0, end}, o);
    CHECK(sh.frames.front() == Su21Matrix::Identity());
    d.push_back(std::max(sh.max_unitarity(), sh.max_determinant()));
  }
  CHECK(d.back() <= 1e-8);
  CHECK(std::log2(d[0] / d[1]) >= 3.5);
  CHECK(std::log2(d[1] / d[2]) >= 3.5);
}

TEST_CASE("projection keeps the frame in the group") {
  const auto f = trivial_disk_sampler();
  FrameOptions o;
  o.step = 0.02;
  o.project = true;
  const FrameSheet sh = integrate_frame(*f, {0.0, Complex(0.3, 0.1), Complex(-0.2, 0.4)}, o);
  CHECK(sh.max_unitarity() < 1e-13);
  CHECK(sh.max_determinant() < 1e-13);
}

TEST_CASE("contractible loop holonomy vanishes at fourth order") {
  const auto f = trivial_disk_sampler();
  const auto loop = square_loop(Complex(-0.1, -0.2), 0.4);
  double prev = 0.0;
  for (double h : {0.04, 0.02, 0.01}) {
    FrameOptions o;
    o.step = h;
    const double d = loop_holonomy_defect(*f, loop, o);
    if (prev > 0.0) CHECK(std::log2(prev / d) >= 3.5);
    prev = d;
  }
  CHECK_THROWS_AS(loop_holonomy_defect(*f, {0.0, 0.1, Complex(0.1, 0.1)}), InvalidArgument);
}

TEST_CASE("homotopic paths give the same frame") {
  const auto f = trivial_disk_sampler();
  FrameOptions o;
  o.step = 0.005;
  const Complex a(0.0, 0.0), b(0.35, 0.25);
  const FrameSheet p1 = integrate_frame(*f, {a, Complex(0.35, 0.0), b}, o);
  const FrameSheet p2 = integrate_frame(*f, {a, Complex(0.0, 0.25), b}, o);
  CHECK((p1.frames.back() - p2.frames.back()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("step too large") {
  const auto f = trivial_disk_sampler();
  FrameOptions o;
  o.step = 0.6;
  CHECK_THROWS_AS(integrate_frame(*f, {0.0, Complex(0.6, 0.0)}, o), StepTooLarge);
}

TEST_CASE("flatness of the hyperbolic disk is second order") {
  const auto f = trivial_disk_sampler();
  const Complex z(0.2, -0.3);
  const double d1 = flatness_defect(*f, z, 0.02).structure;
  const double d2 = flatness_defect(*f, z, 0.01).structure;
  CHECK(d2 < 1e-3);
  CHECK(std::log2(d1 / d2) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(flatness_defect(*f, z, 0.01).holomorphy == 0.0);
}

TEST_CASE("mesh sampler on the octagon") {
  const auto s = build_genus2_octagon(4);
  const auto q = synthetic_cubic(s, {{0, 6}}, 1.0);
  const MeshSampler m(scaled(q, 0.0), ScalarField::Zero(s->num_classes));
  const auto exact = trivial_disk_sampler();
  for (Complex z : {Complex(0.05, 0.02), Complex(-0.2, 0.3), Complex(0.4, -0.1)}) {
    const FramePoint a = m.sample(z), b = exact->sample(z);
    CHECK(a.s == doctest::Approx(b.s).epsilon(1e-3));
    CHECK(std::abs(a.ls_z - b.ls_z) < 2e-2);
  }
  CHECK_THROWS_AS(m.sample(Complex(0.95, 0.0)), InvalidArgument);

  // synthetic q is not holomorphic and is flagged as such
  const MeshSampler mq(q, ScalarField::Zero(s->num_classes));
  CHECK_FALSE(mq.holomorphic());
  CHECK(flatness_defect(mq, Complex(0.2, 0.1), 1e-3).holomorphy > 1e-3);
}

TEST_CASE("frame on a converged octagon solution") {
  const auto s = build_genus2_octagon(3);
  const auto q = synthetic_cubic(s, {{0, 6}}, 1.0);
  const Problem p(s, q);
  const double t = 0.3;
  const SolutionPoint sp = newton_solve(p, ScalarField::Zero(p.size()), t);
  const MeshSampler m(scaled(q, t), sp.u);
  FrameOptions o;
  o.step = 0.005;
  o.flatness = true;
  const FrameSheet sh = integrate_frame(m, {Complex(0.0, 0.0), Complex(0.3, 0.2)}, o);
  CHECK(sh.max_unitarity() < 1e-8);
  CHECK(sh.s_field.size() == sh.path.size());
  CHECK(sh.defects.back().flatness > 0.0);
}
