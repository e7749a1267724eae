#ifndef CLIPOPT_PROX_HPP
#define CLIPOPT_PROX_HPP

#include <cmath>
#include <limits>

#include "clipopt/errors.hpp"
#include "clipopt/vec.hpp"

namespace clipopt {

// h(x) = lambda * ||x||_1 + indicator of the box [l, u].
// The closed-form prox below (soft-threshold then clamp) is exact only when
// the box contains the origin, so the constructor rejects lambda > 0 with
// 0 outside [l, u].
class BoxL1Regularizer {
 public:
  BoxL1Regularizer(double lambda, Vector l, Vector u)
      : lambda_(lambda), l_(std::move(l)), u_(std::move(u)) {
    if (!(lambda_ >= 0.0))
      throw InvalidRegularizer("BoxL1Regularizer: lambda must be >= 0");
    if (l_.size() != u_.size())
      throw InvalidRegularizer("BoxL1Regularizer: bound dimension mismatch");
    if (!all_finite(l_) || !all_finite(u_))
      throw InvalidRegularizer("BoxL1Regularizer: bounds must be finite");
    if ((l_.array() > u_.array()).any())
      throw InvalidRegularizer("BoxL1Regularizer: requires l <= u");
    if (lambda_ > 0.0 && ((l_.array() > 0.0).any() || (u_.array() < 0.0).any()))
      throw InvalidRegularizer(
          "BoxL1Regularizer: lambda > 0 requires 0 in [l, u]");
  }

  // Symmetric box [-b, b]^n.
  static BoxL1Regularizer symmetric_box(double lambda, int n, double b) {
    return BoxL1Regularizer(lambda, Vector::Constant(n, -b), Vector::Constant(n, b));
  }

  double lambda() const { return lambda_; }
  const Vector& lower() const { return l_; }
  const Vector& upper() const { return u_; }
  Eigen::Index dim() const { return l_.size(); }

  bool contains(const Vector& x, double tol = 0.0) const {
    return x.size() == l_.size() && (x.array() >= l_.array() - tol).all() &&
           (x.array() <= u_.array() + tol).all();
  }

  // h(x); +inf outside the box.
  double value(const Vector& x) const {
    if (!contains(x)) return std::numeric_limits<double>::infinity();
    return lambda_ * x.lpNorm<1>();
  }

  // Euclidean diameter of dom h.
  double diameter() const { return (u_ - l_).norm(); }

 private:
  double lambda_;
  Vector l_;
  Vector u_;
};

// prox_{eta h}(x) with h as above: per-coordinate soft-threshold by
// eta*lambda followed by clamping to [l, u].
inline Vector prox_box_l1(const Vector& x, double eta, const BoxL1Regularizer& reg) {
  if (std::isnan(eta) || eta < 0.0)
    throw InvalidInput("prox_box_l1: eta must be >= 0");
  if (!all_finite(x))
    throw InvalidInput("prox_box_l1: non-finite input coordinate");
  if (x.size() != reg.dim())
    throw InvalidInput("prox_box_l1: dimension mismatch");
  return project_box(soft_threshold(x, eta * reg.lambda()), reg.lower(), reg.upper());
}

}  // namespace clipopt

#endif  // CLIPOPT_PROX_HPP
