#ifndef CLIPOPT_NOISE_HPP
#define CLIPOPT_NOISE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "clipopt/problem.hpp"
#include "clipopt/rng.hpp"
#include "clipopt/vec.hpp"

namespace clipopt {

enum class NoiseKind { pareto_sym, cauchy, gaussian, none };

// Tail constants certified by a noise model (per coordinate):
//   E|zeta|^alpha <= lambda1   and   p(z) <= lambda2 * |z|^-(alpha+1) for |z| >= z1,
// extended with the dimension n and the gradient bound Uf of the problem the
// noise is attached to. For models whose nominal-index moment diverges, alpha
// here is a *working* index strictly below the nominal one (see the
// factories); every bound formula consumes these working constants.
struct TailBoundConstants {
  double alpha = 2.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double z1 = 1.0;
  double Uf = 0.0;
  int n = 1;
};

// Coordinate-wise additive noise distribution.
//
// pareto_sym(alpha): zeta = Y * U^(-1/alpha), Y Rademacher, U uniform (0,1].
//   Support |zeta| >= 1, P(|zeta| >= t) = t^-alpha for t >= 1, density
//   (alpha/2)|z|^-(alpha+1). The alpha-th moment diverges, so the certified
//   constants use the working index 0.9*alpha, for which
//   E|zeta|^(0.9 alpha) = alpha / (alpha - 0.9 alpha) = 10 exactly.
// cauchy: standard Cauchy, nominal tail index 1, working index 0.9 with
//   lambda2 = 1/pi and lambda1 = E|zeta|^0.9 evaluated once by quadrature.
// gaussian(sigma): mean-zero normal, tail index 2, lambda1 = sigma^2 (the
//   second moment is finite, no working-index downgrade).
// none: deterministic zero noise; sample() consumes no draws.
class NoiseModel {
 public:
  static NoiseModel pareto_sym(double alpha);
  static NoiseModel cauchy();
  static NoiseModel gaussian(double sigma);
  static NoiseModel none();

  NoiseKind kind() const { return kind_; }
  // Nominal tail index: alpha for pareto_sym, 1 for cauchy, 2 for gaussian.
  double alpha() const { return alpha_; }
  double sigma() const { return sigma_; }
  std::string name() const;

  // One draw. Consumes exactly 2 engine words for pareto_sym (sign, U),
  // 1 for cauchy, 2 for gaussian (Box-Muller), 0 for none.
  double sample(RngStream& rng) const;

  bool symmetric() const { return true; }
  bool has_density() const { return kind_ != NoiseKind::none; }
  double density(double z) const;
  // P(zeta >= t), analytic.
  double tail_above(double t) const;
  // Interior kinks of the density, for piecewise quadrature.
  std::vector<double> density_breakpoints() const;

  // Working-index constants (see class comment), with the caller's Uf and n.
  TailBoundConstants constants(double Uf = 0.0, int n = 1) const;

  // Decay-rate constants of the truncated mean and tail asymmetry. All
  // built-in models are symmetric, so both vanish identically and the onset
  // threshold equals z1.
  double gamma1() const { return 0.0; }
  double gamma2() const { return 0.0; }
  double tau2_min() const { return 1.0; }

 private:
  NoiseModel(NoiseKind k, double alpha, double sigma)
      : kind_(k), alpha_(alpha), sigma_(sigma) {}

  NoiseKind kind_;
  double alpha_;
  double sigma_;
};

// Minimal oracle interface the solvers consume; test doubles script it.
class StochasticGradientOracle {
 public:
  virtual ~StochasticGradientOracle() = default;
  virtual Vector sample_gradient(const Vector& x) = 0;
  // Stream the draws come from, if any; the momentum solver takes its final
  // index draw from here.
  virtual RngStream* stream() { return nullptr; }
};

// G(x; xi) = grad f(x) + xi with iid coordinates from the model.
// Each call draws dim() noise values in coordinate order.
class NoisyGradientOracle : public StochasticGradientOracle {
 public:
  NoisyGradientOracle(const CompositeProblem& problem, NoiseModel model,
                      RngStream stream)
      : problem_(problem), model_(model), stream_(stream) {}

  Vector sample_gradient(const Vector& x) override {
    Vector g = problem_.smooth_grad(x);
    if (model_.kind() != NoiseKind::none)
      for (Eigen::Index i = 0; i < g.size(); ++i) g(i) += model_.sample(stream_);
    return g;
  }

  RngStream* stream() override { return &stream_; }
  const NoiseModel& model() const { return model_; }
  const CompositeProblem& problem() const { return problem_; }

 private:
  const CompositeProblem& problem_;
  NoiseModel model_;
  RngStream stream_;
};

}  // namespace clipopt

#endif  // CLIPOPT_NOISE_HPP
