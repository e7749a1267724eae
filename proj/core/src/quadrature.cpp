#include "clipopt/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "clipopt/errors.hpp"

namespace clipopt {
namespace {

using Fn = std::function<double(double)>;

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const Fn& f, double a, double fa, double b, double fb, double m,
             double fm, double whole, double eps, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1);
}

}  // namespace

double integrate_adaptive(const Fn& f, double a, double b, double abs_tol) {
  if (!(abs_tol > 0.0)) throw InvalidInput("integrate_adaptive: abs_tol must be > 0");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw InvalidInput("integrate_adaptive: endpoints must be finite");
  if (a == b) return 0.0;
  if (a > b) return -integrate_adaptive(f, b, a, abs_tol);
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return adapt(f, a, fa, b, fb, m, fm, whole, abs_tol, 52);
}

double integrate_adaptive_pw(const Fn& f, double a, double b,
                             std::vector<double> breakpoints, double abs_tol) {
  if (a > b) return -integrate_adaptive_pw(f, b, a, std::move(breakpoints), abs_tol);
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double lo = std::max(a, breakpoints[i]);
    const double hi = std::min(b, breakpoints[i + 1]);
    if (hi > lo) total += integrate_adaptive(f, lo, hi, abs_tol);
  }
  return total;
}

}  // namespace clipopt
