#ifndef CLIPOPT_PROBLEM_HPP
#define CLIPOPT_PROBLEM_HPP

#include <string>

#include "clipopt/prox.hpp"
#include "clipopt/vec.hpp"

namespace clipopt {

// Certified constants of a composite instance F = f + h. U_f bounds
// ||grad f||_inf over dom h, D_h is the Euclidean diameter of dom h, and
// F_low lower-bounds F over dom h.
struct ProblemConstants {
  double L_f = 0.0;
  double mu_f = 0.0;
  double U_f = 0.0;
  double D_h = 0.0;
  double F_low = 0.0;
  bool convex = true;
};

// min F(x) = f(x) + h(x) with f smooth and h a BoxL1Regularizer.
class CompositeProblem {
 public:
  virtual ~CompositeProblem() = default;

  virtual int dim() const = 0;
  virtual double smooth_value(const Vector& x) const = 0;
  virtual Vector smooth_grad(const Vector& x) const = 0;
  virtual const BoxL1Regularizer& reg() const = 0;
  virtual const ProblemConstants& constants() const = 0;
  virtual std::string name() const = 0;

  // F(x) = f(x) + h(x); +inf outside dom h.
  double objective(const Vector& x) const { return smooth_value(x) + reg().value(x); }
};

}  // namespace clipopt

#endif  // CLIPOPT_PROBLEM_HPP
