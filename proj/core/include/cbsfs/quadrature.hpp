#pragma once

#include <functional>
#include <span>
#include <stdexcept>

namespace cbsfs {

/// Raised when an adaptive integral fails to reach its tolerance.
class numeric_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;

  /// Throws std::invalid_argument unless abs_tol > 0, rel_tol > 0 and
  /// max_subdivisions >= 1.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod quadrature on [a, b]. The interval
/// is first split at every breakpoint strictly inside (a, b); the subinterval
/// with the largest error estimate is bisected until the summed error meets
/// max(abs_tol, rel_tol * |value|) or the subdivision budget is exhausted.
QuadratureResult integrate_adaptive(const Integrand& f, double a, double b,
                                    const QuadratureSpec& spec = {},
                                    std::span<const double> breakpoints = {});

/// Integral over [a, +inf) via u = a + t / (1 - t), t in [0, 1).
/// Breakpoints are given in the original u variable.
QuadratureResult integrate_to_infinity(const Integrand& f, double a,
                                       const QuadratureSpec& spec = {},
                                       std::span<const double> breakpoints = {});

// Throwing wrappers: numeric_failure when the tolerance is not met.
double integrate(const Integrand& f, double a, double b,
                 const QuadratureSpec& spec = {},
                 std::span<const double> breakpoints = {});
double integrate_tail(const Integrand& f, double a,
                      const QuadratureSpec& spec = {},
                      std::span<const double> breakpoints = {});

}  // namespace cbsfs
