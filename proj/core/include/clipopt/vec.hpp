#ifndef CLIPOPT_VEC_HPP
#define CLIPOPT_VEC_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "clipopt/errors.hpp"

namespace clipopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline bool all_finite(const Vector& v) { return v.allFinite(); }

// Coordinate-wise projection onto the l-inf ball of radius tau.
// tau = 0 collapses everything to the origin; tau = +inf is the identity.
inline Vector clip_inf(const Vector& g, double tau) {
  if (std::isnan(tau) || tau < 0.0)
    throw InvalidInput("clip_inf: tau must be >= 0");
  if (!all_finite(g))
    throw InvalidInput("clip_inf: non-finite input coordinate");
  return g.cwiseMin(tau).cwiseMax(-tau);
}

// Coordinate-wise projection onto the box [l, u].
inline Vector project_box(const Vector& x, const Vector& l, const Vector& u) {
  if (x.size() != l.size() || x.size() != u.size())
    throw InvalidInput("project_box: dimension mismatch");
  if ((l.array() > u.array()).any())
    throw InvalidInput("project_box: requires l <= u");
  return x.cwiseMax(l).cwiseMin(u);
}

inline double soft_threshold(double x, double t) {
  return std::copysign(std::max(std::abs(x) - t, 0.0), x);
}

inline Vector soft_threshold(const Vector& x, double t) {
  return x.unaryExpr([t](double v) { return soft_threshold(v, t); });
}

}  // namespace clipopt

#endif  // CLIPOPT_VEC_HPP
