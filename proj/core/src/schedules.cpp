#include "clipopt/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clipopt/errors.hpp"

namespace clipopt {

double eta_convex(std::int64_t K, const ProblemConstants& pc, double s2) {
  if (K < 1) throw InvalidInput("eta_convex: K must be >= 1");
  if (s2 < 0.0) throw InvalidInput("eta_convex: s2 must be >= 0");
  const double inner = pc.L_f * pc.L_f * pc.D_h * pc.D_h / 4.0 + s2;
  if (!(inner > 0.0)) throw DomainError("eta_convex: L_f and s2 both zero");
  return pc.D_h / std::sqrt(2.0 * static_cast<double>(K) * inner);
}

double eta_scvx(std::int64_t k, double mu_f) {
  if (k < 0) throw InvalidInput("eta_scvx: k must be >= 0");
  if (!(mu_f > 0.0)) throw UnsupportedRegime("eta_scvx: requires mu_f > 0");
  return 2.0 / (mu_f * static_cast<double>(k + 1));
}

EtaTheta eta_theta_ncvx(std::int64_t K, const ProblemConstants& pc, double s2_hat,
                        double s2_floor, double F0) {
  if (K < 1) throw InvalidInput("eta_theta_ncvx: K must be >= 1");
  if (!(pc.L_f > 0.0)) throw DomainError("eta_theta_ncvx: requires L_f > 0");
  if (s2_hat < 0.0 || s2_floor < 0.0)
    throw InvalidInput("eta_theta_ncvx: second moments must be >= 0");
  const double Q = F0 - pc.F_low + s2_floor / pc.L_f;
  if (!(Q >= 0.0)) throw DomainError("eta_theta_ncvx: F0 below F_low");
  double branch = std::numeric_limits<double>::infinity();
  if (s2_hat > 0.0 && Q > 0.0)
    branch = std::sqrt(Q / (static_cast<double>(K) * pc.L_f * s2_hat));
  EtaTheta r;
  r.eta = 0.25 * std::min(1.0 / pc.L_f, branch);
  r.theta = 4.0 * pc.L_f * r.eta;
  return r;
}

double k_bound_convex(double eps, const ProblemConstants& pc, double s2) {
  if (!(eps > 0.0)) throw InvalidInput("k_bound_convex: eps must be > 0");
  if (s2 < 0.0) throw InvalidInput("k_bound_convex: s2 must be >= 0");
  const double inner = pc.L_f * pc.L_f * pc.D_h * pc.D_h / 4.0 + s2;
  const double raw = 8.0 * pc.D_h * pc.D_h * inner / (eps * eps);
  return std::ceil(std::max(raw, 1.0));
}

ScvxBound k_bound_scvx(double eps, const ProblemConstants& pc, double s2) {
  if (!(eps > 0.0)) throw InvalidInput("k_bound_scvx: eps must be > 0");
  if (!(pc.mu_f > 0.0)) throw DomainError("k_bound_scvx: requires mu_f > 0");
  if (s2 < 0.0) throw InvalidInput("k_bound_scvx: s2 must be >= 0");
  ScvxBound r;
  r.C = 4.0 * (pc.L_f * pc.L_f * pc.D_h * pc.D_h + 4.0 * s2) / (pc.mu_f * eps);
  if (r.C <= std::exp(1.0)) {
    r.degenerate = true;
    r.k = 3.0;
    return r;
  }
  r.k = std::ceil(std::max(r.C * std::log(r.C), 3.0));
  return r;
}

double k_bound_ncvx(double eps, const ProblemConstants& pc, double s2_hat,
                    double s2_floor, double F0) {
  if (!(eps > 0.0)) throw InvalidInput("k_bound_ncvx: eps must be > 0");
  if (!(pc.L_f > 0.0)) throw DomainError("k_bound_ncvx: requires L_f > 0");
  if (s2_hat < 0.0 || s2_floor < 0.0)
    throw InvalidInput("k_bound_ncvx: second moments must be >= 0");
  const double Q = F0 - pc.F_low + s2_floor / pc.L_f;
  const double t1 = 512.0 * pc.L_f * Q / (3.0 * eps * eps);
  const double t2 = 65536.0 * pc.L_f * Q * s2_hat / (eps * eps * eps * eps);
  return std::ceil(std::max({1.0, t1, t2}));
}

}  // namespace clipopt
