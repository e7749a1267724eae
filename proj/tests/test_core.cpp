#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "clipopt/prox.hpp"
#include "clipopt/rng.hpp"
#include "clipopt/vec.hpp"
#include "test_util.hpp"

using clipopt::BoxL1Regularizer;
using clipopt::clip_inf;
using clipopt::project_box;
using clipopt::prox_box_l1;
using clipopt::RngStream;
using clipopt::soft_threshold;
using clipopt::Vector;

namespace {
Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}
}  // namespace

TEST_CASE("clip_inf clamps per coordinate") {
  Vector g = vec3(7.0, -3.0, 0.5);
  Vector c = clip_inf(g, 5.0);
  CHECK(c(0) == 5.0);
  CHECK(c(1) == -3.0);
  CHECK(c(2) == 0.5);

  CHECK(clip_inf(g, 0.0).isZero(0.0));

  Vector e(2);
  e << 2.0 + 1e-12, -2.0;
  Vector ce = clip_inf(e, 2.0);
  CHECK(ce(0) == 2.0);
  CHECK(ce(1) == -2.0);

  // tau = +inf disables clipping.
  Vector cinf = clip_inf(g, std::numeric_limits<double>::infinity());
  CHECK(cinf == g);
}

TEST_CASE("clip_inf rejects bad input") {
  Vector g = vec3(1.0, 2.0, 3.0);
  CHECK_THROWS_AS(clip_inf(g, -1.0), clipopt::InvalidInput);
  CHECK_THROWS_AS(clip_inf(g, std::nan("")), clipopt::InvalidInput);
  g(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(clip_inf(g, 1.0), clipopt::InvalidInput);
  g(1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(clip_inf(g, 1.0), clipopt::InvalidInput);
}

TEST_CASE("clip_inf is nonexpansive and bounded") {
  RngStream rng(101);
  for (int it = 0; it < 10000; ++it) {
    const int n = 1 + static_cast<int>(rng.below(6));
    Vector a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a(i) = 20.0 * (rng.uniform01() - 0.5);
      b(i) = 20.0 * (rng.uniform01() - 0.5);
    }
    const double tau = 8.0 * rng.uniform01();
    const Vector ca = clip_inf(a, tau), cb = clip_inf(b, tau);
    CHECK((ca - cb).lpNorm<Eigen::Infinity>() <=
          (a - b).lpNorm<Eigen::Infinity>() + 1e-15);
    CHECK(ca.lpNorm<Eigen::Infinity>() <= tau);
    // Identity whenever the input already fits.
    if (a.lpNorm<Eigen::Infinity>() <= tau) CHECK(ca == a);
  }
}

TEST_CASE("project_box basics") {
  Vector x(2), l(2), u(2);
  x << 3.0, -3.0;
  l << -1.0, -1.0;
  u << 1.0, 1.0;
  Vector p = project_box(x, l, u);
  CHECK(p(0) == 1.0);
  CHECK(p(1) == -1.0);

  Vector bad_l(2), bad_u(2);
  bad_l << 1.0, 0.0;
  bad_u << -1.0, 0.0;
  CHECK_THROWS_AS(project_box(x, bad_l, bad_u), clipopt::InvalidInput);
}

TEST_CASE("soft_threshold scalar and vector") {
  CHECK(soft_threshold(3.0, 1.0) == 2.0);
  CHECK(soft_threshold(-0.5, 1.0) == 0.0);
  CHECK(soft_threshold(-3.0, 1.0) == -2.0);
  Vector v = vec3(3.0, -0.5, 0.0);
  Vector s = soft_threshold(v, 1.0);
  CHECK(s(0) == 2.0);
  CHECK(s(1) == 0.0);
  CHECK(s(2) == 0.0);
}

TEST_CASE("BoxL1Regularizer validation and value") {
  Vector l = vec3(-1.0, -2.0, -0.5);
  Vector u = vec3(1.0, 0.5, 2.0);
  BoxL1Regularizer reg(0.5, l, u);
  CHECK(reg.diameter() == doctest::Approx((u - l).norm()).epsilon(1e-15));
  CHECK(reg.value(vec3(0.5, -0.5, 1.0)) == doctest::Approx(1.0));
  CHECK(std::isinf(reg.value(vec3(5.0, 0.0, 0.0))));
  CHECK(reg.contains(vec3(1.0, 0.5, 2.0)));

  // lambda > 0 with a box that misses the origin is rejected.
  Vector lp = vec3(0.5, 0.5, 0.5);
  Vector up = vec3(1.0, 1.0, 1.0);
  CHECK_THROWS_AS(BoxL1Regularizer(1.0, lp, up), clipopt::InvalidRegularizer);
  // lambda = 0 with the same box is fine (pure projection).
  BoxL1Regularizer proj_only(0.0, lp, up);
  Vector x0 = Vector::Zero(3);
  CHECK(prox_box_l1(x0, 1.0, proj_only) == lp);
  CHECK_THROWS_AS(BoxL1Regularizer(-1.0, l, u), clipopt::InvalidRegularizer);
}

TEST_CASE("prox_box_l1 worked example") {
  BoxL1Regularizer reg = BoxL1Regularizer::symmetric_box(0.1, 3, 1.0);
  Vector x = vec3(3.0, -0.2, 0.05);
  Vector p = prox_box_l1(x, 1.0, reg);
  CHECK(p(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p(1) == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(p(2) == 0.0);

  CHECK_THROWS_AS(prox_box_l1(x, -1.0, reg), clipopt::InvalidInput);
}

TEST_CASE("prox_box_l1 agrees with grid-search oracle") {
  RngStream rng(202);
  double max_err = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const double l = -10.0 * rng.uniform01();
    const double u = 10.0 * rng.uniform01();
    const double lambda = 3.0 * rng.uniform01();
    const double eta = 0.01 + 2.0 * rng.uniform01();
    const double x = 30.0 * (rng.uniform01() - 0.5);

    Vector xv(1), lv(1), uv(1);
    xv << x;
    lv << l;
    uv << u;
    BoxL1Regularizer reg(lambda, lv, uv);
    const double got = prox_box_l1(xv, eta, reg)(0);
    const double want = testutil::brute_prox_1d(x, eta * lambda, l, u);
    max_err = std::max(max_err, std::abs(got - want));
    CHECK(std::abs(got - want) <= 1e-6);
    CHECK(got >= l);
    CHECK(got <= u);
  }
  MESSAGE("prox oracle max abs error: " << max_err);
}

TEST_CASE("prox_box_l1 with lambda = 0 is the box projection") {
  RngStream rng(303);
  for (int it = 0; it < 200; ++it) {
    const int n = 1 + static_cast<int>(rng.below(8));
    Vector l(n), u(n), x(n);
    for (int i = 0; i < n; ++i) {
      l(i) = -5.0 * rng.uniform01();
      u(i) = 5.0 * rng.uniform01();
      x(i) = 20.0 * (rng.uniform01() - 0.5);
    }
    BoxL1Regularizer reg(0.0, l, u);
    CHECK(prox_box_l1(x, 0.7, reg) == project_box(x, l, u));
  }
}
