#include "clipopt/noise.hpp"

#include <cmath>

#include "clipopt/errors.hpp"
#include "clipopt/quadrature.hpp"

namespace clipopt {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// E|zeta|^0.9 for the standard Cauchy: (2/pi) * int_0^inf z^0.9/(1+z^2) dz.
// Body on [0, Z] by adaptive quadrature; the tail uses the alternating
// expansion 1/(1+z^2) = sum_j (-1)^j z^(-2-2j), whose terms at Z = 100 drop
// below 1e-13 after four entries.
double cauchy_lambda1_compute() {
  const double Z = 100.0;
  const double body = integrate_adaptive(
      [](double z) { return std::pow(z, 0.9) / (1.0 + z * z); }, 0.0, Z, 1e-12);
  double tail = 0.0;
  double sign = 1.0;
  for (int j = 0; j < 4; ++j) {
    const double e = 0.1 + 2.0 * j;
    tail += sign * std::pow(Z, -e) / e;
    sign = -sign;
  }
  return 2.0 / kPi * (body + tail);
}

double cauchy_lambda1() {
  static const double v = cauchy_lambda1_compute();
  return v;
}

// sup over |z| >= 1 of |z|^3 * gaussian pdf; the unconstrained maximizer is
// sqrt(3)*sigma.
double gaussian_lambda2(double sigma) {
  const double zstar = std::max(1.0, std::sqrt(3.0) * sigma);
  const double pdf = std::exp(-0.5 * zstar * zstar / (sigma * sigma)) /
                     (sigma * std::sqrt(2.0 * kPi));
  return zstar * zstar * zstar * pdf;
}

}  // namespace

NoiseModel NoiseModel::pareto_sym(double alpha) {
  if (!(alpha > 0.0) || alpha > 2.0)
    throw InvalidInput("NoiseModel::pareto_sym: alpha must be in (0, 2]");
  return NoiseModel(NoiseKind::pareto_sym, alpha, 0.0);
}

NoiseModel NoiseModel::cauchy() { return NoiseModel(NoiseKind::cauchy, 1.0, 0.0); }

NoiseModel NoiseModel::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidInput("NoiseModel::gaussian: sigma must be > 0");
  return NoiseModel(NoiseKind::gaussian, 2.0, sigma);
}

NoiseModel NoiseModel::none() { return NoiseModel(NoiseKind::none, 2.0, 0.0); }

std::string NoiseModel::name() const {
  switch (kind_) {
    case NoiseKind::pareto_sym: return "pareto-sym";
    case NoiseKind::cauchy: return "cauchy";
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::none: return "none";
  }
  return "?";
}

double NoiseModel::sample(RngStream& rng) const {
  switch (kind_) {
    case NoiseKind::pareto_sym: {
      // Sign first, then U; |result| >= 1 always.
      const double y = rng.rademacher();
      const double u = rng.uniform_open0();
      return y * std::pow(u, -1.0 / alpha_);
    }
    case NoiseKind::cauchy:
      return std::tan(kPi * (rng.uniform01() - 0.5));
    case NoiseKind::gaussian:
      return sigma_ * rng.normal();
    case NoiseKind::none:
      return 0.0;
  }
  return 0.0;
}

double NoiseModel::density(double z) const {
  switch (kind_) {
    case NoiseKind::pareto_sym: {
      const double a = std::abs(z);
      return a >= 1.0 ? 0.5 * alpha_ * std::pow(a, -alpha_ - 1.0) : 0.0;
    }
    case NoiseKind::cauchy:
      return 1.0 / (kPi * (1.0 + z * z));
    case NoiseKind::gaussian:
      return std::exp(-0.5 * z * z / (sigma_ * sigma_)) /
             (sigma_ * std::sqrt(2.0 * kPi));
    case NoiseKind::none:
      throw UnsupportedModel("NoiseModel::density: zero-noise model has none");
  }
  return 0.0;
}

double NoiseModel::tail_above(double t) const {
  switch (kind_) {
    case NoiseKind::pareto_sym:
      if (t >= 1.0) return 0.5 * std::pow(t, -alpha_);
      if (t > -1.0) return 0.5;
      return 1.0 - 0.5 * std::pow(-t, -alpha_);
    case NoiseKind::cauchy:
      return 0.5 - std::atan(t) / kPi;
    case NoiseKind::gaussian:
      return 0.5 * std::erfc(t / (sigma_ * std::sqrt(2.0)));
    case NoiseKind::none:
      throw UnsupportedModel("NoiseModel::tail_above: zero-noise model has none");
  }
  return 0.0;
}

std::vector<double> NoiseModel::density_breakpoints() const {
  if (kind_ == NoiseKind::pareto_sym) return {-1.0, 1.0};
  return {};
}

TailBoundConstants NoiseModel::constants(double Uf, int n) const {
  TailBoundConstants c;
  c.Uf = Uf;
  c.n = n;
  c.z1 = 1.0;
  switch (kind_) {
    case NoiseKind::pareto_sym:
      // E|zeta|^(0.9 alpha) = alpha/(alpha - 0.9 alpha) = 10 for every alpha;
      // written as the literal so the cancellation is exact.
      c.alpha = 0.9 * alpha_;
      c.lambda1 = 10.0;
      c.lambda2 = 0.5 * alpha_;
      break;
    case NoiseKind::cauchy:
      c.alpha = 0.9;
      c.lambda1 = cauchy_lambda1();
      c.lambda2 = 1.0 / kPi;
      break;
    case NoiseKind::gaussian:
      c.alpha = 2.0;
      c.lambda1 = sigma_ * sigma_;
      c.lambda2 = gaussian_lambda2(sigma_);
      break;
    case NoiseKind::none:
      c.alpha = 2.0;
      c.lambda1 = 0.0;
      c.lambda2 = 0.0;
      break;
  }
  return c;
}

}  // namespace clipopt
