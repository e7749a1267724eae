#include "clipopt/biasvar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "clipopt/csv.hpp"
#include "clipopt/errors.hpp"
#include "clipopt/quadrature.hpp"

namespace clipopt {

BiasVarEstimate estimate_bias_variance(const NoiseModel& model, double a,
                                       double tau, std::int64_t n_samples,
                                       RngStream& rng) {
  if (!std::isfinite(a)) throw InvalidInput("estimate_bias_variance: a must be finite");
  if (std::isnan(tau) || tau < 0.0)
    throw InvalidInput("estimate_bias_variance: tau must be >= 0");
  if (n_samples < 1) throw InvalidInput("estimate_bias_variance: need n_samples >= 1");

  // Deviations x = clamp(a + zeta, -tau, tau) - a; Welford keeps the
  // accumulation single-pass for both moments.
  double mean = 0.0, m2 = 0.0;       // of x
  double mean_sq = 0.0, m2_sq = 0.0; // of x^2
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const double z = model.kind() == NoiseKind::none ? 0.0 : model.sample(rng);
    const double x = std::clamp(a + z, -tau, tau) - a;
    const double k = static_cast<double>(i + 1);
    double d = x - mean;
    mean += d / k;
    m2 += d * (x - mean);
    const double xs = x * x;
    d = xs - mean_sq;
    mean_sq += d / k;
    m2_sq += d * (xs - mean_sq);
  }
  const double n = static_cast<double>(n_samples);
  BiasVarEstimate est;
  est.n_samples = n_samples;
  est.bias_hat = std::abs(mean);
  est.var_hat = mean_sq;
  if (n_samples >= 2) {
    est.stderr_bias = std::sqrt(m2 / (n - 1.0) / n);
    est.stderr_var = std::sqrt(m2_sq / (n - 1.0) / n);
  } else {
    // A single draw carries no spread information.
    est.stderr_bias = std::numeric_limits<double>::quiet_NaN();
    est.stderr_var = std::numeric_limits<double>::quiet_NaN();
  }
  return est;
}

namespace {
void require_lemma31_domain(const TailBoundConstants& c, double a, double tau,
                            const char* who) {
  if (!(tau >= c.z1 + std::abs(a)))
    throw DomainError(std::string(who) + ": requires tau >= z1 + |a|");
  if (!(c.alpha > 0.0) || c.alpha > 2.0)
    throw DomainError(std::string(who) + ": alpha must be in (0, 2]");
}
}  // namespace

double lemma31_bias_bound(const NoiseModel& model, const TailBoundConstants& c,
                          double a, double tau) {
  require_lemma31_domain(c, a, tau, "lemma31_bias_bound");
  const double aa = std::abs(a);

  const double trunc_mean = integrate_adaptive_pw(
      [&](double z) { return z * model.density(z); }, -tau, tau,
      model.density_breakpoints(), 1e-9);
  const double tail_asym =
      tau * std::abs(model.tail_above(tau) - (1.0 - model.tail_above(-tau)));

  double shift = 0.0;
  if (aa > 0.0) {
    const double d = tau - aa;
    shift = 2.0 * c.lambda2 * aa / std::pow(d, c.alpha) * (aa / d + 1.0 / c.alpha);
  }
  return std::abs(trunc_mean) + tail_asym + shift;
}

double lemma31_var_bound(const TailBoundConstants& c, double a, double tau) {
  require_lemma31_domain(c, a, tau, "lemma31_var_bound");
  const double aa = std::abs(a);
  return c.lambda1 * std::pow(tau + aa, 2.0 - c.alpha) +
         2.0 * c.lambda2 * (tau * tau + a * a) /
             (c.alpha * std::pow(tau - aa, c.alpha));
}

double sigma_sq(double tau, const TailBoundConstants& c) {
  if (!(c.alpha > 0.0) || c.alpha > 2.0)
    throw DomainError("sigma_sq: alpha must be in (0, 2]");
  if (!(tau > c.Uf)) throw DomainError("sigma_sq: requires tau > Uf");
  const double n = static_cast<double>(c.n);
  return n * (c.lambda1 * std::pow(tau + c.Uf, 2.0 - c.alpha) +
              2.0 * c.lambda2 * (tau * tau + c.Uf * c.Uf) /
                  (c.alpha * std::pow(tau - c.Uf, c.alpha)));
}

double tau1_eps(double eps, const TailBoundConstants& c, double tau_min) {
  if (!(eps > 0.0)) throw InvalidInput("tau1_eps: eps must be > 0");
  if (!(c.alpha > 1.0))
    throw UnsupportedRegime(
        "tau1_eps: requires working index alpha > 1; use tau2_eps");
  if (c.alpha > 2.0) throw DomainError("tau1_eps: alpha must be in (1, 2]");
  const double rn = std::sqrt(static_cast<double>(c.n));
  const double t2 =
      std::pow(6.0 * rn * c.lambda2 / ((c.alpha - 1.0) * eps), 1.0 / (c.alpha - 1.0));
  const double t3 =
      c.Uf + std::pow(4.0 * rn * c.lambda2 * c.Uf * tau_min / (c.z1 * eps),
                      1.0 / c.alpha);
  return std::max({tau_min, t2, t3});
}

double tau2_eps(double eps, const TailBoundConstants& c, double gamma1,
                double gamma2, double tau2_min) {
  if (!(eps > 0.0)) throw InvalidInput("tau2_eps: eps must be > 0");
  if (!(c.alpha > 0.0) || c.alpha > 2.0)
    throw DomainError("tau2_eps: alpha must be in (0, 2]");
  if (gamma1 < 0.0 || gamma2 < 0.0)
    throw InvalidInput("tau2_eps: gamma constants must be >= 0");
  const double rn = std::sqrt(static_cast<double>(c.n));
  const double t2 = std::pow(2.0 * rn * (gamma1 + gamma2) / eps, 1.0 / c.alpha);
  const double t3 =
      c.Uf + std::pow(4.0 * rn * c.lambda2 * c.Uf * (c.Uf / c.z1 + 1.0 / c.alpha) / eps,
                      1.0 / c.alpha);
  return std::max({tau2_min, t2, t3});
}

double estimate_bias_at_point(StochasticGradientOracle& oracle, const Vector& x,
                              const Vector& grad_exact, double tau,
                              std::int64_t n_samples) {
  if (n_samples < 1) throw InvalidInput("estimate_bias_at_point: need n_samples >= 1");
  if (std::isnan(tau) || tau < 0.0)
    throw InvalidInput("estimate_bias_at_point: tau must be >= 0");
  Vector acc = Vector::Zero(grad_exact.size());
  for (std::int64_t s = 0; s < n_samples; ++s)
    acc += clip_inf(oracle.sample_gradient(x), tau) - grad_exact;
  return (acc / static_cast<double>(n_samples)).norm();
}

double delta_probe(const CompositeProblem& problem, const NoiseModel& model,
                   const Vector& at, double tau, std::int64_t n_samples,
                   RngStream& rng, int n_probe) {
  const BoxL1Regularizer& reg = problem.reg();
  if (!reg.contains(at)) throw InvalidInput("delta_probe: point outside dom h");

  std::vector<Vector> points;
  points.push_back(at);
  for (int p = 0; p < n_probe; ++p) {
    Vector v(reg.dim());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v(i) = reg.lower()(i) + rng.uniform01() * (reg.upper()(i) - reg.lower()(i));
    points.push_back(std::move(v));
  }

  // Each probe point gets its own child stream, keyed by position.
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    NoisyGradientOracle oracle(problem, model, rng.split(i));
    const Vector g = problem.smooth_grad(points[i]);
    worst = std::max(worst,
                     estimate_bias_at_point(oracle, points[i], g, tau, n_samples));
  }
  return worst;
}

bool in_tau_set(const CompositeProblem& problem, const NoiseModel& model,
                const Vector& at, double tau, double eps,
                std::int64_t n_samples, RngStream& rng) {
  const TailBoundConstants c = model.constants(problem.constants().U_f, problem.dim());
  const double tau_min = c.z1 + c.Uf;
  if (tau < tau_min) return false;
  return delta_probe(problem, model, at, tau, n_samples, rng) <= eps;
}

const char* kBiasVarCsvHeader =
    "model,alpha,a,tau,bias_hat,stderr_bias,var_hat,stderr_var,bias_bound,"
    "var_bound,n_samples,seed";

std::string biasvar_csv_row(const NoiseModel& model, double a, double tau,
                            const BiasVarEstimate& est, double bias_bound,
                            double var_bound, std::uint64_t seed) {
  std::ostringstream os;
  os << model.name() << ',' << fmt_double(model.alpha()) << ',' << fmt_double(a)
     << ',' << fmt_double(tau) << ',' << fmt_double(est.bias_hat) << ','
     << fmt_double(est.stderr_bias) << ',' << fmt_double(est.var_hat) << ','
     << fmt_double(est.stderr_var) << ',' << fmt_double(bias_bound) << ','
     << fmt_double(var_bound) << ',' << est.n_samples << ',' << seed;
  return os.str();
}

}  // namespace clipopt
