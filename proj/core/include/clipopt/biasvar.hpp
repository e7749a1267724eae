#ifndef CLIPOPT_BIASVAR_HPP
#define CLIPOPT_BIASVAR_HPP

#include <cstdint>
#include <string>

#include "clipopt/noise.hpp"
#include "clipopt/problem.hpp"
#include "clipopt/rng.hpp"
#include "clipopt/vec.hpp"

namespace clipopt {

// Monte-Carlo estimate of the bias and variance of the clipped scalar
// estimator clamp(a + zeta, -tau, tau) of a.
struct BiasVarEstimate {
  double bias_hat = 0.0;     // |sample mean of deviations|
  double stderr_bias = 0.0;  // standard error of that mean
  double var_hat = 0.0;      // sample mean of squared deviations
  double stderr_var = 0.0;   // standard error of that mean
  std::int64_t n_samples = 0;
};

// Draws n_samples values from the model (one per sample, in order).
// Requires tau >= 0 (tau = 0 collapses the estimator to -a exactly) and
// n_samples >= 2.
BiasVarEstimate estimate_bias_variance(const NoiseModel& model, double a,
                                       double tau, std::int64_t n_samples,
                                       RngStream& rng);

// One-dimensional clipped-mean bias bound at threshold tau for an estimate
// of a corrupted by model noise:
//   |int_{-tau}^{tau} z p(z) dz| + tau * |P(zeta >= tau) - P(zeta <= -tau)|
//     + (2 M2 |a| / (tau - |a|)^alpha) * (|a| / (tau - |a|) + 1/alpha),
// with (alpha, M2, z1) taken from the working constants. The first term is
// evaluated by adaptive quadrature of the model density, the second from the
// analytic tails (both vanish for the symmetric built-ins). Requires
// tau >= z1 + |a|.
double lemma31_bias_bound(const NoiseModel& model, const TailBoundConstants& c,
                          double a, double tau);

// Matching variance bound:
//   M1 (tau + |a|)^(2 - alpha) + 2 M2 (tau^2 + a^2) / (alpha (tau - |a|)^alpha).
// Requires tau >= z1 + |a|.
double lemma31_var_bound(const TailBoundConstants& c, double a, double tau);

// Aggregate second-moment bound on || G_tau(x; xi) - grad f(x) ||^2:
//   n * [ lambda1 (tau + Uf)^(2 - alpha)
//         + 2 lambda2 (tau^2 + Uf^2) / (alpha (tau - Uf)^alpha) ].
// Requires tau > Uf; meaningful for tau >= z1 + Uf.
double sigma_sq(double tau, const TailBoundConstants& c);

// Threshold recipe for working index alpha in (1, 2]:
//   max{ tau_min,
//        (6 sqrt(n) lambda2 / ((alpha - 1) eps))^(1/(alpha-1)),
//        Uf + (4 sqrt(n) lambda2 Uf tau_min / (z1 eps))^(1/alpha) }.
// tau_min is the validity floor z1 + Uf. Throws UnsupportedRegime when
// alpha <= 1 (use tau2_eps with decay-rate constants instead).
double tau1_eps(double eps, const TailBoundConstants& c, double tau_min);

// Threshold recipe valid for any working index alpha in (0, 2], given the
// decay-rate constants (gamma1, gamma2) and their onset threshold tau2_min:
//   max{ tau2_min,
//        (2 sqrt(n) (gamma1 + gamma2) / eps)^(1/alpha),
//        Uf + (4 sqrt(n) lambda2 Uf (Uf/z1 + 1/alpha) / eps)^(1/alpha) }.
double tau2_eps(double eps, const TailBoundConstants& c, double gamma1,
                double gamma2, double tau2_min);

// Monte-Carlo estimate of || E[G_tau(x; xi)] - grad f(x) || at a single
// point: per-coordinate mean of clip_inf(sample, tau) - grad over n_samples
// oracle calls, then the Euclidean norm of that mean vector.
double estimate_bias_at_point(StochasticGradientOracle& oracle, const Vector& x,
                              const Vector& grad_exact, double tau,
                              std::int64_t n_samples);

// Probe estimate of Delta(tau) = sup over dom h of the clipped-mean bias
// norm: evaluates estimate_bias_at_point at `at` plus n_probe points drawn
// uniformly from the box, and returns the max. Draws the probe points from
// rng first (dim() uniforms each), then runs the estimates in order.
double delta_probe(const CompositeProblem& problem, const NoiseModel& model,
                   const Vector& at, double tau, std::int64_t n_samples,
                   RngStream& rng, int n_probe = 8);

// Membership test for the admissible-threshold set T(eps):
// tau >= tau_min and the probed Delta(tau) <= eps.
bool in_tau_set(const CompositeProblem& problem, const NoiseModel& model,
                const Vector& at, double tau, double eps,
                std::int64_t n_samples, RngStream& rng);

// One output row of the bias/variance experiment. Columns:
// model,alpha,a,tau,bias_hat,stderr_bias,var_hat,stderr_var,bias_bound,
// var_bound,n_samples,seed. Bounds are written as nan when tau is below the
// validity floor.
extern const char* kBiasVarCsvHeader;
std::string biasvar_csv_row(const NoiseModel& model, double a, double tau,
                            const BiasVarEstimate& est, double bias_bound,
                            double var_bound, std::uint64_t seed);

}  // namespace clipopt

#endif  // CLIPOPT_BIASVAR_HPP
