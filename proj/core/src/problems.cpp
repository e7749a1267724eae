#include "clipopt/problems.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "clipopt/csv.hpp"
#include "clipopt/errors.hpp"

namespace clipopt {

double power_iteration_sym(const std::function<Vector(const Vector&)>& matvec,
                           int n, double rel_tol, int max_iter) {
  if (n <= 0) throw InvalidInput("power_iteration_sym: n must be > 0");
  RngStream rng(0x9e1u);  // pinned start so the estimate is reproducible
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = matvec(v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double next = v.dot(w);
    v = w / nw;
    if (it > 0 && std::abs(next - lambda) <= rel_tol * std::max(1.0, std::abs(next))) {
      return next;
    }
    lambda = next;
  }
  return lambda;
}

namespace {

double robust_phi(double t) { return t * t / (1.0 + t * t); }
double robust_dphi(double t) {
  const double d = 1.0 + t * t;
  return 2.0 * t / (d * d);
}

// || |A^T| (|A| mx + |b|) ||_inf with mx_i = max(|l_i|, |u_i|): interval
// bound on the lasso gradient over the box.
double lasso_Uf(const Matrix& A, const Vector& b, const BoxL1Regularizer& reg) {
  const Vector mx = reg.lower().cwiseAbs().cwiseMax(reg.upper().cwiseAbs());
  const Vector inner = (A.cwiseAbs() * mx + b.cwiseAbs());
  return (A.cwiseAbs().transpose() * inner).lpNorm<Eigen::Infinity>();
}

void check_dims(const Matrix& A, const Vector& b, const BoxL1Regularizer& reg,
                const char* who) {
  if (A.rows() != b.size())
    throw InvalidInput(std::string(who) + ": A rows must match b size");
  if (A.cols() != reg.dim())
    throw InvalidInput(std::string(who) + ": A cols must match box dimension");
  if (!A.allFinite() || !all_finite(b))
    throw InvalidInput(std::string(who) + ": data must be finite");
}

}  // namespace

LassoBoxProblem::LassoBoxProblem(Matrix A, Vector b, BoxL1Regularizer reg,
                                 std::uint64_t data_seed)
    : A_(std::move(A)), b_(std::move(b)), reg_(std::move(reg)), data_seed_(data_seed) {
  check_dims(A_, b_, reg_, "LassoBoxProblem");
  consts_.L_f = power_iteration_sym(
      [this](const Vector& v) { return A_.transpose() * (A_ * v); }, dim());
  consts_.mu_f = 0.0;
  consts_.U_f = lasso_Uf(A_, b_, reg_);
  consts_.D_h = reg_.diameter();
  consts_.F_low = 0.0;
  consts_.convex = true;
}

double LassoBoxProblem::smooth_value(const Vector& x) const {
  return 0.5 * (A_ * x - b_).squaredNorm();
}

Vector LassoBoxProblem::smooth_grad(const Vector& x) const {
  return A_.transpose() * (A_ * x - b_);
}

RobustRegressionProblem::RobustRegressionProblem(Matrix A, Vector b,
                                                 BoxL1Regularizer reg,
                                                 std::uint64_t data_seed)
    : A_(std::move(A)), b_(std::move(b)), reg_(std::move(reg)), data_seed_(data_seed) {
  check_dims(A_, b_, reg_, "RobustRegressionProblem");
  consts_.L_f = 2.0 * power_iteration_sym(
                          [this](const Vector& v) { return A_.transpose() * (A_ * v); },
                          dim());
  consts_.mu_f = 0.0;
  // |phi'| peaks at t = 1/sqrt(3) with value 3 sqrt(3) / 8.
  consts_.U_f = (3.0 * std::sqrt(3.0) / 8.0) *
                (A_.cwiseAbs().colwise().sum()).maxCoeff();
  consts_.D_h = reg_.diameter();
  consts_.F_low = 0.0;
  consts_.convex = false;
}

double RobustRegressionProblem::smooth_value(const Vector& x) const {
  const Vector r = A_ * x - b_;
  double s = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) s += robust_phi(r(i));
  return s;
}

Vector RobustRegressionProblem::smooth_grad(const Vector& x) const {
  Vector r = A_ * x - b_;
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = robust_dphi(r(i));
  return A_.transpose() * r;
}

QuadBoxProblem::QuadBoxProblem(double mu, Vector c, BoxL1Regularizer reg,
                               std::uint64_t data_seed)
    : mu_(mu), c_(std::move(c)), reg_(std::move(reg)), data_seed_(data_seed) {
  if (!(mu_ > 0.0)) throw InvalidInput("QuadBoxProblem: mu must be > 0");
  if (c_.size() != reg_.dim())
    throw InvalidInput("QuadBoxProblem: c must match box dimension");
  consts_.L_f = mu_;
  consts_.mu_f = mu_;
  consts_.U_f = mu_ * ((reg_.lower() - c_).cwiseAbs().cwiseMax(
                           (reg_.upper() - c_).cwiseAbs()))
                          .maxCoeff();
  consts_.D_h = reg_.diameter();
  consts_.F_low = 0.0;
  consts_.convex = true;
}

double QuadBoxProblem::smooth_value(const Vector& x) const {
  return 0.5 * mu_ * (x - c_).squaredNorm();
}

Vector QuadBoxProblem::smooth_grad(const Vector& x) const { return mu_ * (x - c_); }

std::unique_ptr<LassoBoxProblem> make_lasso_box(int m, int n, double lambda,
                                                double bound, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
  Vector b(m);
  for (int i = 0; i < m; ++i) b(i) = rng.normal();
  return std::make_unique<LassoBoxProblem>(
      std::move(A), std::move(b), BoxL1Regularizer::symmetric_box(lambda, n, bound),
      seed);
}

std::unique_ptr<RobustRegressionProblem> make_robust_regression(
    int m, int n, double lambda, double bound, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
  Vector b(m);
  for (int i = 0; i < m; ++i) b(i) = rng.normal();
  return std::make_unique<RobustRegressionProblem>(
      std::move(A), std::move(b), BoxL1Regularizer::symmetric_box(lambda, n, bound),
      seed);
}

std::unique_ptr<QuadBoxProblem> make_quad_box(int n, double mu, double lambda,
                                              double bound, std::uint64_t seed) {
  RngStream rng(seed);
  Vector c(n);
  for (int i = 0; i < n; ++i) c(i) = rng.normal();
  BoxL1Regularizer reg = BoxL1Regularizer::symmetric_box(lambda, n, bound);
  c = project_box(c, reg.lower(), reg.upper());
  return std::make_unique<QuadBoxProblem>(mu, std::move(c), std::move(reg), seed);
}

ReferenceSolution reference_solve(const CompositeProblem& problem, double tol,
                                  std::int64_t max_iter) {
  const ProblemConstants& pc = problem.constants();
  if (!pc.convex)
    throw UnsupportedRegime("reference_solve: refuses nonconvex problems");
  // L_f = 0 means f is affine; any step works on a bounded box.
  const double eta = pc.L_f > 0.0 ? 1.0 / pc.L_f : 1.0;
  const BoxL1Regularizer& reg = problem.reg();
  Vector x = project_box(Vector::Zero(problem.dim()), reg.lower(), reg.upper());
  ReferenceSolution sol;
  for (sol.iters = 0; sol.iters < max_iter; ++sol.iters) {
    const Vector x_next = prox_box_l1(x - eta * problem.smooth_grad(x), eta, reg);
    sol.resid = (x - x_next).norm() / eta;
    x = x_next;
    if (sol.resid <= tol) break;
  }
  sol.x = x;
  sol.F = problem.objective(x);
  return sol;
}

namespace {

void write_vector(std::ostream& os, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    os << (i ? " " : "") << fmt_double(v(i));
  os << '\n';
}

Vector read_vector(std::istream& is, Eigen::Index n, const char* who) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(is >> v(i))) throw InvalidInput(std::string(who) + ": truncated vector");
  return v;
}

std::string expect_key(std::istream& is, const std::string& key, const char* who) {
  std::string k, val;
  if (!(is >> k >> val) || k != key)
    throw InvalidInput(std::string(who) + ": expected key '" + key + "'");
  return val;
}

}  // namespace

void save_problem(const std::string& path, const CompositeProblem& problem) {
  std::ofstream os(path);
  if (!os) throw std::ios_base::failure("cannot open for writing: " + path);
  os << "clipopt-problem 1\n";
  os << "kind " << problem.name() << '\n';

  const BoxL1Regularizer& reg = problem.reg();
  if (const auto* p = dynamic_cast<const LassoBoxProblem*>(&problem)) {
    os << "m " << p->A().rows() << "\nn " << p->A().cols() << "\nseed "
       << p->data_seed() << "\nlambda " << fmt_double(reg.lambda()) << '\n';
    os << "l ";
    write_vector(os, reg.lower());
    os << "u ";
    write_vector(os, reg.upper());
    os << "A\n";
    for (Eigen::Index i = 0; i < p->A().rows(); ++i)
      write_vector(os, p->A().row(i).transpose());
    os << "b\n";
    write_vector(os, p->b());
  } else if (const auto* p = dynamic_cast<const RobustRegressionProblem*>(&problem)) {
    os << "m " << p->A().rows() << "\nn " << p->A().cols() << "\nseed "
       << p->data_seed() << "\nlambda " << fmt_double(reg.lambda()) << '\n';
    os << "l ";
    write_vector(os, reg.lower());
    os << "u ";
    write_vector(os, reg.upper());
    os << "A\n";
    for (Eigen::Index i = 0; i < p->A().rows(); ++i)
      write_vector(os, p->A().row(i).transpose());
    os << "b\n";
    write_vector(os, p->b());
  } else if (const auto* p = dynamic_cast<const QuadBoxProblem*>(&problem)) {
    os << "m 0\nn " << p->dim() << "\nseed " << p->data_seed() << "\nlambda "
       << fmt_double(reg.lambda()) << '\n';
    os << "mu " << fmt_double(p->mu()) << '\n';
    os << "l ";
    write_vector(os, reg.lower());
    os << "u ";
    write_vector(os, reg.upper());
    os << "c\n";
    write_vector(os, p->c());
  } else {
    throw UnsupportedModel("save_problem: unknown problem kind");
  }
  if (!os) throw std::ios_base::failure("write failed: " + path);
}

std::unique_ptr<CompositeProblem> load_problem(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::ios_base::failure("cannot open for reading: " + path);
  const char* who = "load_problem";

  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "clipopt-problem" || version != 1)
    throw InvalidInput("load_problem: not a clipopt-problem v1 file");
  const std::string kind = expect_key(is, "kind", who);
  const auto m = static_cast<Eigen::Index>(std::stoll(expect_key(is, "m", who)));
  const auto n = static_cast<Eigen::Index>(std::stoll(expect_key(is, "n", who)));
  const auto seed = static_cast<std::uint64_t>(std::stoull(expect_key(is, "seed", who)));
  const double lambda = std::stod(expect_key(is, "lambda", who));

  double mu = 0.0;
  if (kind == "quad-box") mu = std::stod(expect_key(is, "mu", who));

  std::string tag;
  is >> tag;
  if (tag != "l") throw InvalidInput("load_problem: expected 'l'");
  Vector l = read_vector(is, n, who);
  is >> tag;
  if (tag != "u") throw InvalidInput("load_problem: expected 'u'");
  Vector u = read_vector(is, n, who);
  BoxL1Regularizer reg(lambda, std::move(l), std::move(u));

  if (kind == "lasso-box" || kind == "robust-regression") {
    is >> tag;
    if (tag != "A") throw InvalidInput("load_problem: expected 'A'");
    Matrix A(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
      A.row(i) = read_vector(is, n, who).transpose();
    is >> tag;
    if (tag != "b") throw InvalidInput("load_problem: expected 'b'");
    Vector b = read_vector(is, m, who);
    if (kind == "lasso-box")
      return std::make_unique<LassoBoxProblem>(std::move(A), std::move(b),
                                               std::move(reg), seed);
    return std::make_unique<RobustRegressionProblem>(std::move(A), std::move(b),
                                                     std::move(reg), seed);
  }
  if (kind == "quad-box") {
    is >> tag;
    if (tag != "c") throw InvalidInput("load_problem: expected 'c'");
    Vector c = read_vector(is, n, who);
    return std::make_unique<QuadBoxProblem>(mu, std::move(c), std::move(reg), seed);
  }
  throw InvalidInput("load_problem: unknown kind '" + kind + "'");
}

}  // namespace clipopt
