#pragma once

namespace cbsfs {

/// Euler-Mascheroni constant.
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243104;

/// Digamma function Psi(x) = Gamma'(x) / Gamma(x) for x > 0.
double digamma(double x);

/// Euler Beta function and its logarithm, evaluated through log-Gamma.
double log_beta(double a, double b);
double beta_fn(double a, double b);

/// Upper incomplete Gamma function at order zero, Gamma(0, r) = E1(r), r > 0.
double gamma_upper_zero(double r);

/// exp(r) * Gamma(0, r); finite for large r where Gamma(0, r) underflows.
double scaled_gamma_upper_zero(double r);

/// E[log(1 + x / E)] for E ~ Exp(1), x >= 0. Equals x * h_scale(x) and
/// log(x) + gamma + exp(x) Gamma(0, x), evaluated without cancellation
/// near x = 0.
double expected_log1p_ratio(double x);

/// Regularised cubic-remainder integrand:
///   (1 - e^-u - u + u^2/2 - u^3/6) / u^2   for u <= 1,
///   (1 - e^-u) / u^2                       for u > 1.
/// The first piece is summed as a power series to avoid cancellation.
double f_integrand(double u);

/// h_scale(x) = int_0^inf (1 - e^-u) / u * du / (u + x), by adaptive
/// quadrature. Diverges as x -> 0, so x must be strictly positive.
double h_scale(double x);

/// h0(x) = (1 + x/2 + x^2/6) log(1 + x) - x int_0^inf f(u) / (u + x) du.
double h0(double x);

/// h1(x) = x h0(x).
double h1(double x);

/// order-th derivative of h1 for order in {0, 1, 2}, by differentiation
/// under the integral sign.
double h1_deriv(double x, int order);

}  // namespace cbsfs
