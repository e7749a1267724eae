#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <string>

#include "clipopt/errors.hpp"
#include "clipopt/problems.hpp"
#include "clipopt/rng.hpp"
#include "test_util.hpp"

using namespace clipopt;

namespace {

Vector random_box_point(const BoxL1Regularizer& reg, RngStream& rng, double shrink = 1.0) {
  Vector x(reg.dim());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double c = 0.5 * (reg.lower()(i) + reg.upper()(i));
    const double r = 0.5 * (reg.upper()(i) - reg.lower()(i)) * shrink;
    x(i) = c + (2.0 * rng.uniform01() - 1.0) * r;
  }
  return x;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/clipopt_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("power iteration on known spectra") {
  SUBCASE("diagonal") {
    Vector d(3);
    d << 1.0, 5.0, 2.0;
    const double top = power_iteration_sym(
        [&](const Vector& v) { return d.asDiagonal() * v; }, 3);
    CHECK(top == doctest::Approx(5.0).epsilon(1e-9));
  }
  SUBCASE("two by two with known eigenvalues") {
    Matrix M(2, 2);
    M << 2.0, 1.0, 1.0, 2.0;  // eigenvalues 1 and 3
    const double top =
        power_iteration_sym([&](const Vector& v) { return M * v; }, 2);
    CHECK(top == doctest::Approx(3.0).epsilon(1e-9));
  }
  SUBCASE("agrees with a dense eigensolver") {
    RngStream rng(12);
    Matrix A(30, 20);
    for (int i = 0; i < 30; ++i)
      for (int j = 0; j < 20; ++j) A(i, j) = rng.normal();
    const Matrix G = A.transpose() * A;
    const double top =
        power_iteration_sym([&](const Vector& v) { return G * v; }, 20);
    Eigen::SelfAdjointEigenSolver<Matrix> es(G);
    CHECK(top == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-8));
  }
  SUBCASE("deterministic") {
    Matrix M(2, 2);
    M << 4.0, 1.0, 1.0, 4.0;
    auto mv = [&](const Vector& v) { return M * v; };
    CHECK(power_iteration_sym(mv, 2) == power_iteration_sym(mv, 2));
  }
}

TEST_CASE("lasso-box instance") {
  auto p = make_lasso_box(40, 25, 1.0, 100.0, 11);
  RngStream rng(71);

  SUBCASE("objective is a nonnegative least-squares value") {
    for (int t = 0; t < 20; ++t) {
      const Vector x = random_box_point(p->reg(), rng, 0.01);
      const double f = p->smooth_value(x);
      CHECK(f >= 0.0);
      CHECK(f == doctest::Approx(0.5 * (p->A() * x - p->b()).squaredNorm()));
      CHECK(p->objective(x) >= p->constants().F_low);
    }
  }
  SUBCASE("gradient matches finite differences") {
    for (int t = 0; t < 10; ++t) {
      Vector x = random_box_point(p->reg(), rng, 0.01);
      const Vector g = p->smooth_grad(x);
      const Vector fd = testutil::fd_gradient(
          [&](const Vector& y) { return p->smooth_value(y); }, x);
      CHECK((g - fd).lpNorm<Eigen::Infinity>() <= 1e-5);
    }
  }
  SUBCASE("gradient is Lipschitz with the power-iteration constant") {
    const double L = p->constants().L_f * 1.01;
    for (int t = 0; t < 100; ++t) {
      const Vector x = random_box_point(p->reg(), rng);
      const Vector y = random_box_point(p->reg(), rng);
      CHECK((p->smooth_grad(x) - p->smooth_grad(y)).norm() <=
            L * (x - y).norm() + 1e-9);
    }
  }
  SUBCASE("gradient bound holds over the box") {
    const double Uf = p->constants().U_f;
    for (int t = 0; t < 1000; ++t) {
      const Vector x = random_box_point(p->reg(), rng);
      CHECK(p->smooth_grad(x).lpNorm<Eigen::Infinity>() <= Uf);
    }
  }
  SUBCASE("constants wiring") {
    CHECK(p->constants().mu_f == 0.0);
    CHECK(p->constants().convex);
    CHECK(p->constants().D_h == doctest::Approx(p->reg().diameter()));
    CHECK(p->constants().F_low == 0.0);
    CHECK(p->name() == "lasso-box");
    CHECK(p->dim() == 25);
  }
  SUBCASE("zero design reduces to pure l1") {
    LassoBoxProblem z(Matrix::Zero(4, 3), Vector::Zero(4),
                      BoxL1Regularizer::symmetric_box(1.0, 3, 5.0));
    Vector x(3);
    x << 1.0, -2.0, 0.5;
    CHECK(z.smooth_grad(x).norm() == 0.0);
    ReferenceSolution sol = reference_solve(z, 1e-10);
    CHECK(sol.x.norm() <= 1e-10);
  }
  SUBCASE("generation is seed-deterministic") {
    auto q1 = make_lasso_box(40, 25, 1.0, 100.0, 11);
    auto q2 = make_lasso_box(40, 25, 1.0, 100.0, 12);
    CHECK(p->A() == q1->A());
    CHECK(p->b() == q1->b());
    CHECK(p->A() != q2->A());
  }
}

TEST_CASE("robust-regression instance") {
  auto p = make_robust_regression(40, 25, 1.0, 100.0, 11);
  RngStream rng(72);

  SUBCASE("phi values on a scalar instance") {
    // One row, a = 1, b = 0: f(x) = phi(x) = x^2/(1+x^2).
    Matrix A(1, 1);
    A << 1.0;
    RobustRegressionProblem scalar(A, Vector::Zero(1),
                                   BoxL1Regularizer::symmetric_box(0.0, 1, 10.0));
    Vector x(1);
    x << 0.0;
    CHECK(scalar.smooth_value(x) == 0.0);
    x << 1.0;
    CHECK(scalar.smooth_value(x) == doctest::Approx(0.5));
    CHECK(scalar.smooth_grad(x)(0) == doctest::Approx(0.5));  // 2/(1+1)^2
    CHECK_FALSE(scalar.constants().convex);
  }
  SUBCASE("phi is bounded so f stays below the row count") {
    for (int t = 0; t < 50; ++t) {
      const Vector x = random_box_point(p->reg(), rng);
      const double f = p->smooth_value(x);
      CHECK(f >= 0.0);
      CHECK(f < 40.0);
    }
  }
  SUBCASE("phi derivative bounds behind the constants") {
    // |phi'| <= 3 sqrt(3)/8 at t = 1/sqrt(3); |phi''| <= 2 at t = 0.
    auto dphi = [](double t) {
      const double d = 1.0 + t * t;
      return 2.0 * t / (d * d);
    };
    auto ddphi = [](double t) {
      const double d = 1.0 + t * t;
      return 2.0 * (1.0 - 3.0 * t * t) / (d * d * d);
    };
    double max_d = 0.0, max_dd = 0.0;
    for (int i = -40000; i <= 40000; ++i) {
      const double t = i * 1e-3;
      max_d = std::max(max_d, std::abs(dphi(t)));
      max_dd = std::max(max_dd, std::abs(ddphi(t)));
    }
    CHECK(max_d <= 3.0 * std::sqrt(3.0) / 8.0 + 1e-12);
    CHECK(max_d == doctest::Approx(3.0 * std::sqrt(3.0) / 8.0).epsilon(1e-6));
    CHECK(max_dd <= 2.0);
    CHECK(max_dd == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("gradient matches finite differences") {
    for (int t = 0; t < 10; ++t) {
      Vector x = random_box_point(p->reg(), rng, 0.01);
      const Vector g = p->smooth_grad(x);
      const Vector fd = testutil::fd_gradient(
          [&](const Vector& y) { return p->smooth_value(y); }, x);
      CHECK((g - fd).lpNorm<Eigen::Infinity>() <= 1e-5);
    }
  }
  SUBCASE("gradient is Lipschitz with the analytic constant") {
    const double L = p->constants().L_f;
    for (int t = 0; t < 100; ++t) {
      const Vector x = random_box_point(p->reg(), rng);
      const Vector y = random_box_point(p->reg(), rng);
      CHECK((p->smooth_grad(x) - p->smooth_grad(y)).norm() <=
            L * (x - y).norm() + 1e-9);
    }
  }
  SUBCASE("gradient bound holds over the box") {
    const double Uf = p->constants().U_f;
    for (int t = 0; t < 1000; ++t) {
      const Vector x = random_box_point(p->reg(), rng);
      CHECK(p->smooth_grad(x).lpNorm<Eigen::Infinity>() <= Uf);
    }
  }
  SUBCASE("reference solve refuses nonconvex instances") {
    CHECK_THROWS_AS(reference_solve(*p), UnsupportedRegime);
  }
}

TEST_CASE("quad-box instance") {
  auto p = make_quad_box(12, 2.0, 0.0, 3.0, 5);
  SUBCASE("constants") {
    CHECK(p->constants().L_f == 2.0);
    CHECK(p->constants().mu_f == 2.0);
    CHECK(p->constants().convex);
    const double expect =
        2.0 * ((p->reg().lower() - p->c()).cwiseAbs().cwiseMax(
                   (p->reg().upper() - p->c()).cwiseAbs()))
                  .maxCoeff();
    CHECK(p->constants().U_f == doctest::Approx(expect));
    CHECK(p->c().lpNorm<Eigen::Infinity>() <= 3.0);  // projected into the box
  }
  SUBCASE("gradient closed form") {
    Vector x = Vector::Constant(12, 0.25);
    CHECK((p->smooth_grad(x) - 2.0 * (x - p->c())).norm() == 0.0);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(
        QuadBoxProblem(0.0, Vector::Zero(2), BoxL1Regularizer::symmetric_box(0.0, 2, 1.0)),
        InvalidInput);
    CHECK_THROWS_AS(
        QuadBoxProblem(1.0, Vector::Zero(3), BoxL1Regularizer::symmetric_box(0.0, 2, 1.0)),
        InvalidInput);
  }
}

TEST_CASE("reference solve closed forms") {
  SUBCASE("quad-box projects the center") {
    auto p = make_quad_box(20, 1.5, 0.0, 0.5, 9);
    // Recreate with an off-box center so the projection is active.
    Vector c = Vector::LinSpaced(20, -2.0, 2.0);
    QuadBoxProblem q(1.5, c, BoxL1Regularizer::symmetric_box(0.0, 20, 0.5));
    ReferenceSolution sol = reference_solve(q, 1e-10);
    const Vector expect = project_box(c, q.reg().lower(), q.reg().upper());
    CHECK((sol.x - expect).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK(sol.resid <= 1e-10);
    CHECK(sol.F == doctest::Approx(q.objective(expect)));
  }
  SUBCASE("identity-design lasso soft-thresholds the targets") {
    const int n = 8;
    Vector b(n);
    b << 3.0, -0.2, 0.05, -4.0, 0.3, 0.0, 1.0, -0.31;
    LassoBoxProblem p(Matrix::Identity(n, n), b,
                      BoxL1Regularizer::symmetric_box(0.3, n, 10.0));
    ReferenceSolution sol = reference_solve(p, 1e-11);
    const Vector expect = soft_threshold(b, 0.3);
    CHECK((sol.x - expect).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK(sol.resid <= 1e-11);
  }
  SUBCASE("random lasso reaches a stationary point") {
    auto p = make_lasso_box(30, 12, 1.0, 100.0, 4);
    ReferenceSolution sol = reference_solve(*p, 1e-9);
    CHECK(sol.resid <= 1e-9);
    // Re-running from the solution cannot improve the objective.
    const double eta = 1.0 / p->constants().L_f;
    const Vector again =
        prox_box_l1(sol.x - eta * p->smooth_grad(sol.x), eta, p->reg());
    CHECK(p->objective(again) >= sol.F - 1e-9);
  }
}

TEST_CASE("instance serialization round-trips") {
  RngStream rng(91);
  SUBCASE("lasso-box") {
    TempFile f("lasso.txt");
    auto p = make_lasso_box(7, 5, 0.75, 4.0, 33);
    save_problem(f.path, *p);
    auto q = load_problem(f.path);
    auto* ql = dynamic_cast<LassoBoxProblem*>(q.get());
    REQUIRE(ql != nullptr);
    CHECK(ql->A() == p->A());
    CHECK(ql->b() == p->b());
    CHECK(ql->reg().lambda() == p->reg().lambda());
    CHECK(ql->data_seed() == 33);
    const Vector x = random_box_point(p->reg(), rng);
    CHECK(ql->objective(x) == p->objective(x));
  }
  SUBCASE("robust-regression") {
    TempFile f("robust.txt");
    auto p = make_robust_regression(6, 4, 0.5, 2.0, 17);
    save_problem(f.path, *p);
    auto q = load_problem(f.path);
    auto* qr = dynamic_cast<RobustRegressionProblem*>(q.get());
    REQUIRE(qr != nullptr);
    CHECK(qr->A() == p->A());
    CHECK(qr->b() == p->b());
    CHECK_FALSE(qr->constants().convex);
  }
  SUBCASE("quad-box") {
    TempFile f("quad.txt");
    auto p = make_quad_box(5, 1.25, 0.5, 2.0, 8);
    save_problem(f.path, *p);
    auto q = load_problem(f.path);
    auto* qq = dynamic_cast<QuadBoxProblem*>(q.get());
    REQUIRE(qq != nullptr);
    CHECK(qq->mu() == 1.25);
    CHECK(qq->c() == p->c());
    CHECK(qq->reg().lambda() == 0.5);
  }
  SUBCASE("io and format errors") {
    CHECK_THROWS_AS(load_problem("/nonexistent/nope.txt"), std::ios_base::failure);
    TempFile f("garbage.txt");
    {
      std::FILE* fp = std::fopen(f.path.c_str(), "w");
      std::fputs("not a problem file\n", fp);
      std::fclose(fp);
    }
    CHECK_THROWS_AS(load_problem(f.path), InvalidInput);
  }
}
