#ifndef CLIPOPT_ERRORS_HPP
#define CLIPOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace clipopt {

// Thrown when a caller passes structurally bad data (NaN coordinates,
// negative thresholds, dimension mismatches).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown by BoxL1Regularizer when lambda > 0 but 0 is outside [l, u];
// the soft-threshold/clamp composition is not the exact prox in that case.
class InvalidRegularizer : public std::invalid_argument {
 public:
  explicit InvalidRegularizer(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when a formula is evaluated outside its domain of validity
// (e.g. sigma_sq at tau <= Uf).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Thrown when a parameter recipe is asked for a regime it does not cover
// (e.g. the alpha > 1 threshold recipe at alpha <= 1).
class UnsupportedRegime : public std::domain_error {
 public:
  explicit UnsupportedRegime(const std::string& what) : std::domain_error(what) {}
};

// Thrown when an operation needs model structure the noise model lacks
// (e.g. a density for quadrature).
class UnsupportedModel : public std::domain_error {
 public:
  explicit UnsupportedModel(const std::string& what) : std::domain_error(what) {}
};

// Thrown when a solver is started outside dom h.
class InvalidStart : public std::invalid_argument {
 public:
  explicit InvalidStart(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace clipopt

#endif  // CLIPOPT_ERRORS_HPP
