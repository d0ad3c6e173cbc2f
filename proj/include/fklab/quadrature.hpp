#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace fklab {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 4000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0;
  double error = 0;
  long evaluations = 0;
  bool converged = true;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved) : std::runtime_error(what), achieved_error(achieved) {}
  double achieved_error;
};

using Integrand = std::function<double(double)>;

// Globally adaptive Gauss-Kronrod 10/21 on [a, b] (finite).
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec);
// Same, with the interval pre-split at sorted breakpoints (first and last are the limits).
QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints, const QuadratureSpec& spec);

// Throws QuadratureError (with the achieved error) if the tolerance is not met.
double integrate_checked(const Integrand& f, std::span<const double> breakpoints, const QuadratureSpec& spec,
                         const char* context);
double integrate_checked(const Integrand& f, double a, double b, const QuadratureSpec& spec, const char* context);

}  // namespace fklab
