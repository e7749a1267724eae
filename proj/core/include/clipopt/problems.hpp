#ifndef CLIPOPT_PROBLEMS_HPP
#define CLIPOPT_PROBLEMS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "clipopt/problem.hpp"
#include "clipopt/rng.hpp"

namespace clipopt {

// Dominant eigenvalue of a symmetric PSD operator given as v -> M v,
// by power iteration from a fixed pseudorandom start (seed pinned so results
// are reproducible). Stops when the Rayleigh quotient changes by less than
// rel_tol between sweeps.
double power_iteration_sym(const std::function<Vector(const Vector&)>& matvec,
                           int n, double rel_tol = 1e-12, int max_iter = 10000);

// f(x) = 0.5 ||Ax - b||^2 over h = lambda ||.||_1 + box indicator.
// Constants: L_f = lambda_max(A^T A) by power iteration, mu_f = 0,
// U_f = || |A^T| (|A| max(|l|,|u|) + |b|) ||_inf, F_low = 0.
class LassoBoxProblem : public CompositeProblem {
 public:
  LassoBoxProblem(Matrix A, Vector b, BoxL1Regularizer reg, std::uint64_t data_seed = 0);

  int dim() const override { return static_cast<int>(A_.cols()); }
  double smooth_value(const Vector& x) const override;
  Vector smooth_grad(const Vector& x) const override;
  const BoxL1Regularizer& reg() const override { return reg_; }
  const ProblemConstants& constants() const override { return consts_; }
  std::string name() const override { return "lasso-box"; }

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  std::uint64_t data_seed() const { return data_seed_; }

 private:
  Matrix A_;
  Vector b_;
  BoxL1Regularizer reg_;
  ProblemConstants consts_;
  std::uint64_t data_seed_;
};

// f(x) = sum_i phi(a_i^T x - b_i), phi(t) = t^2 / (1 + t^2).
// |phi''| <= 2 gives L_f = 2 lambda_max(A^T A); |phi'| <= 3 sqrt(3) / 8
// gives U_f = (3 sqrt(3) / 8) * max_j sum_i |A_ij|. Nonconvex; F_low = 0.
class RobustRegressionProblem : public CompositeProblem {
 public:
  RobustRegressionProblem(Matrix A, Vector b, BoxL1Regularizer reg,
                          std::uint64_t data_seed = 0);

  int dim() const override { return static_cast<int>(A_.cols()); }
  double smooth_value(const Vector& x) const override;
  Vector smooth_grad(const Vector& x) const override;
  const BoxL1Regularizer& reg() const override { return reg_; }
  const ProblemConstants& constants() const override { return consts_; }
  std::string name() const override { return "robust-regression"; }

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  std::uint64_t data_seed() const { return data_seed_; }

 private:
  Matrix A_;
  Vector b_;
  BoxL1Regularizer reg_;
  ProblemConstants consts_;
  std::uint64_t data_seed_;
};

// f(x) = (mu/2) ||x - c||^2; mu-strongly convex with L_f = mu_f = mu.
class QuadBoxProblem : public CompositeProblem {
 public:
  QuadBoxProblem(double mu, Vector c, BoxL1Regularizer reg, std::uint64_t data_seed = 0);

  int dim() const override { return static_cast<int>(c_.size()); }
  double smooth_value(const Vector& x) const override;
  Vector smooth_grad(const Vector& x) const override;
  const BoxL1Regularizer& reg() const override { return reg_; }
  const ProblemConstants& constants() const override { return consts_; }
  std::string name() const override { return "quad-box"; }

  double mu() const { return mu_; }
  const Vector& c() const { return c_; }
  std::uint64_t data_seed() const { return data_seed_; }

 private:
  double mu_;
  Vector c_;
  BoxL1Regularizer reg_;
  ProblemConstants consts_;
  std::uint64_t data_seed_;
};

// Data generators with the default experiment sizes: A (m x n) and b (m)
// standard normal, box [-bound, bound]^n. Entries are drawn from
// RngStream(seed): A row-major first, then b.
std::unique_ptr<LassoBoxProblem> make_lasso_box(int m = 200, int n = 100,
                                                double lambda = 1.0,
                                                double bound = 100.0,
                                                std::uint64_t seed = 1);
std::unique_ptr<RobustRegressionProblem> make_robust_regression(
    int m = 200, int n = 100, double lambda = 1.0, double bound = 100.0,
    std::uint64_t seed = 1);
// c has standard normal entries projected onto the box.
std::unique_ptr<QuadBoxProblem> make_quad_box(int n = 100, double mu = 1.0,
                                              double lambda = 0.0,
                                              double bound = 100.0,
                                              std::uint64_t seed = 1);

// Deterministic proximal gradient with exact gradients and step 1/L_f, run
// until the gradient-mapping norm is <= tol. Refuses nonconvex instances.
struct ReferenceSolution {
  Vector x;
  double F = 0.0;
  std::int64_t iters = 0;
  double resid = 0.0;
};
ReferenceSolution reference_solve(const CompositeProblem& problem,
                                  double tol = 1e-9,
                                  std::int64_t max_iter = 500000);

// Plain-text instance dump (version, kind, sizes, seed, lambda, bounds,
// data) with full round-trip precision, so a run is replayable elsewhere.
void save_problem(const std::string& path, const CompositeProblem& problem);
std::unique_ptr<CompositeProblem> load_problem(const std::string& path);

}  // namespace clipopt

#endif  // CLIPOPT_PROBLEMS_HPP
