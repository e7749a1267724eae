#ifndef CLIPOPT_QUADRATURE_HPP
#define CLIPOPT_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace clipopt {

// Adaptive Simpson quadrature with an absolute tolerance (default 1e-9).
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol = 1e-9);

// Same, but splits the range at the given interior breakpoints first so the
// rule never straddles a kink or jump of the integrand.
double integrate_adaptive_pw(const std::function<double(double)>& f, double a,
                             double b, std::vector<double> breakpoints,
                             double abs_tol = 1e-9);

}  // namespace clipopt

#endif  // CLIPOPT_QUADRATURE_HPP
