#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mlag/cutoffs.hpp"
#include "mlag/errors.hpp"

using namespace mlag;

TEST_CASE("theta = 3 blends have the frozen coefficients") {
  const CutoffPair cp = build_cutoffs(3.0);
  REQUIRE(cp.blend1.coeffs.size() == 1);
  REQUIRE(cp.blend2.coeffs.size() == 1);
  const double c1[6] = {0, -2, -1, 16, -30, 14};
  const double c2[6] = {-1, 3, -2, -18, 35, -17};
  for (int j = 0; j < 6; ++j) {
    CHECK(cp.blend1.coeffs[0][j] == doctest::Approx(c1[j]).epsilon(1e-10));
    CHECK(cp.blend2.coeffs[0][j] == doctest::Approx(c2[j]).epsilon(1e-10));
  }
}

TEST_CASE("cutoffs are continuous with their closed forms") {
  for (double theta : {2.5, 3.0, 5.0}) {
    const CutoffPair cp = build_cutoffs(theta);
    const double e = 1e-12;
    for (double s : {0.0, 1.0}) {
      CHECK(cp.f1(s - e) == doctest::Approx(cp.f1(s + e)).epsilon(1e-9));
      CHECK(cp.f2(s - e) == doctest::Approx(cp.f2(s + e)).epsilon(1e-9));
      CHECK(cp.F1(s - e) == doctest::Approx(cp.F1(s + e)).epsilon(1e-9));
      CHECK(cp.F2(s - e) == doctest::Approx(cp.F2(s + e)).epsilon(1e-9));
      CHECK(cp.df1(s - e) == doctest::Approx(cp.df1(s + e)).epsilon(1e-8));
      CHECK(cp.df2(s - e) == doctest::Approx(cp.df2(s + e)).epsilon(1e-8));
    }
  }
}

TEST_CASE("blends are negative inside (0, 1)") {
  const CutoffPair cp = build_cutoffs(3.0);
  for (int i = 1; i < 1000; ++i) {
    const double s = i / 1000.0;
    CHECK(cp.f1(s) < 0.0);
    CHECK(cp.f2(s) < 0.0);
  }
}

TEST_CASE("antiderivatives and derivatives are consistent") {
  const CutoffPair cp = build_cutoffs(3.0);
  const double h = 1e-6;
  for (double s : {-3.0, -0.5, 0.2, 0.5, 0.9, 1.5, 4.0}) {
    CHECK((cp.F1(s + h) - cp.F1(s - h)) / (2 * h) == doctest::Approx(cp.f1(s)).epsilon(1e-6));
    CHECK((cp.F2(s + h) - cp.F2(s - h)) / (2 * h) == doctest::Approx(cp.f2(s)).epsilon(1e-6));
    CHECK((cp.f1(s + h) - cp.f1(s - h)) / (2 * h) == doctest::Approx(cp.df1(s)).epsilon(1e-6));
    CHECK((cp.f2(s + h) - cp.f2(s - h)) / (2 * h) == doctest::Approx(cp.df2(s)).epsilon(1e-6));
  }
}

TEST_CASE("original nonlinearity below zero") {
  const CutoffPair cp = build_cutoffs(3.0);
  const double s = -0.7;
  CHECK(cp.f1(s) == doctest::Approx(2.0 - 2.0 * std::exp(s)));
  CHECK(cp.f2(s) == doctest::Approx(s - std::exp(-2.0 * s)));
}

TEST_CASE("growth inequality has finite constants") {
  const CutoffPair cp = build_cutoffs(3.0);
  const GrowthConstants g = growth_constants(cp);
  CHECK(std::isfinite(g.c1));
  CHECK(std::isfinite(g.c2));
}

TEST_CASE("invalid theta") {
  CHECK_THROWS_AS(build_cutoffs(2.0), InvalidArgument);
  CHECK_THROWS_AS(build_cutoffs(12.0), BlendSignViolation);
}
