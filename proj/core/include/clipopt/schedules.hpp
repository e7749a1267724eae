#ifndef CLIPOPT_SCHEDULES_HPP
#define CLIPOPT_SCHEDULES_HPP

#include <cstdint>

#include "clipopt/problem.hpp"

namespace clipopt {

// Constant step for the averaged-iterate method on convex instances over a
// horizon of K iterations with clipped-noise second moment s2 at the chosen
// threshold:
//   eta = D_h / sqrt( 2 K (L_f^2 D_h^2 / 4 + s2) ).
double eta_convex(std::int64_t K, const ProblemConstants& pc, double s2);

// Decreasing step for mu_f-strongly convex instances: eta_k = 2/(mu_f (k+1)).
double eta_scvx(std::int64_t k, double mu_f);

// Constant step and momentum weight for the nonconvex method:
//   eta = (1/4) min{ 1/L_f, sqrt( Q / (K L_f s2_hat) ) },  theta = 4 L_f eta,
// where Q = F0 - F_low + s2_floor / L_f, s2_hat is the second-moment bound at
// the run threshold and s2_floor the one at the validity floor tau = z1 + Uf.
// theta <= 1 always.
struct EtaTheta {
  double eta = 0.0;
  double theta = 0.0;
};
EtaTheta eta_theta_ncvx(std::int64_t K, const ProblemConstants& pc, double s2_hat,
                        double s2_floor, double F0);

// Iteration-count lower bounds for an eps-accurate run. Returned as the
// ceiled value in a double so extreme constants do not overflow an integer
// type; values below 2^53 are exact.
double k_bound_convex(double eps, const ProblemConstants& pc, double s2);

// K >= max{ C ln C, 3 } with C = 4 (L_f^2 D_h^2 + 4 s2) / (mu_f eps).
// C <= e lies outside the regime where that expression is meaningful
// (eps too large); the bound is then clamped to its floor 3 and flagged.
struct ScvxBound {
  double k = 3.0;
  double C = 0.0;
  bool degenerate = false;
};
ScvxBound k_bound_scvx(double eps, const ProblemConstants& pc, double s2);

double k_bound_ncvx(double eps, const ProblemConstants& pc, double s2_hat,
                    double s2_floor, double F0);

}  // namespace clipopt

#endif  // CLIPOPT_SCHEDULES_HPP
