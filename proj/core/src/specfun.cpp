#include "cbsfs/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbsfs/quadrature.hpp"

namespace cbsfs {

namespace {

[[noreturn]] void domain(const char* fn, double x) {
  throw std::domain_error(std::string(fn) + ": argument out of domain (" + std::to_string(x) + ")");
}

// sum_{k>=1} (-1)^{k+1} x^k / (k k!), the regular part of E1 for small x.
double e1_series_tail(double x) {
  double term = x;  // x^k / k!
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    if (k > 1) term *= x / k;
    const double add = ((k & 1) ? term : -term) / k;
    sum += add;
    if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

// Modified Lentz evaluation of the E1 continued fraction; returns e^x E1(x).
double e1_continued_fraction_scaled(double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw numeric_failure("gamma_upper_zero: continued fraction did not converge");
}

QuadratureSpec tight() {
  QuadratureSpec s;
  s.abs_tol = 1e-15;
  s.rel_tol = 2e-14;
  s.max_subdivisions = 4000;
  return s;
}

// J_p(x) = int_0^inf f(u) / (u + x)^p du.
double j_integral(double x, int p) {
  auto g = [x, p](double u) {
    const double w = u + x;
    double denom = w;
    for (int i = 1; i < p; ++i) denom *= w;
    return f_integrand(u) / denom;
  };
  std::vector<double> cuts;
  if (x > 0.0 && x < 1.0) cuts.push_back(x);
  const QuadratureSpec spec = tight();
  return integrate(g, 0.0, 1.0, spec, cuts) + integrate_tail(g, 1.0, spec, std::array{std::max(1.0, x)});
}

}  // namespace

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) domain("digamma", x);
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  const double series =
      r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
  return shift + std::log(x) - 0.5 / x - series;
}

double log_beta(double a, double b) {
  if (!(a > 0.0)) domain("beta_fn", a);
  if (!(b > 0.0)) domain("beta_fn", b);
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double beta_fn(double a, double b) { return std::exp(log_beta(a, b)); }

double gamma_upper_zero(double r) {
  if (!(r > 0.0)) domain("gamma_upper_zero", r);
  if (r < 1.0) return -euler_gamma - std::log(r) + e1_series_tail(r);
  return e1_continued_fraction_scaled(r) * std::exp(-r);
}

double scaled_gamma_upper_zero(double r) {
  if (!(r > 0.0)) domain("scaled_gamma_upper_zero", r);
  if (r < 1.0) return std::exp(r) * gamma_upper_zero(r);
  return e1_continued_fraction_scaled(r);
}

double expected_log1p_ratio(double x) {
  if (!(x >= 0.0)) domain("expected_log1p_ratio", x);
  if (x == 0.0) return 0.0;
  if (x < 1.0) {
    // log x + gamma + e^x E1(x) with E1 = -gamma - log x + tail: the log terms
    // combine into -(e^x - 1)(log x + gamma), which is O(x log x).
    return -std::expm1(x) * (std::log(x) + euler_gamma) + std::exp(x) * e1_series_tail(x);
  }
  return std::log(x) + euler_gamma + e1_continued_fraction_scaled(x);
}

double f_integrand(double u) {
  if (u > 1.0) return -std::expm1(-u) / (u * u);
  // sum_{k>=4} (-1)^{k+1} u^{k-2} / k!
  double term = u * u / 24.0;
  double sum = -term;
  for (int k = 5; k < 40; ++k) {
    term *= u / k;
    const double add = (k & 1) ? term : -term;
    sum += add;
    if (std::fabs(add) <= 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

double h_scale(double x) {
  if (!(x > 0.0)) domain("h_scale", x);
  auto g = [x](double u) {
    const double ratio = u == 0.0 ? 1.0 : -std::expm1(-u) / u;
    return ratio / (u + x);
  };
  std::vector<double> cuts;
  if (x < 1.0) {
    // Resolve the 1/(u + x) peak of width x near the origin.
    for (double c = x; c < 1.0; c *= 8.0) cuts.push_back(c);
  }
  const QuadratureSpec spec = tight();
  return integrate(g, 0.0, 1.0, spec, cuts) + integrate_tail(g, 1.0, spec, std::array{std::max(1.0, x)});
}

double h0(double x) {
  if (!(x >= 0.0)) domain("h0", x);
  if (x == 0.0) return 0.0;
  const double poly = 1.0 + x / 2.0 + x * x / 6.0;
  return poly * std::log1p(x) - x * j_integral(x, 1);
}

double h1(double x) { return h1_deriv(x, 0); }

double h1_deriv(double x, int order) {
  if (!(x >= 0.0)) domain("h1_deriv", x);
  if (order < 0 || order > 2) throw std::invalid_argument("h1_deriv: order must be 0, 1 or 2");
  // h1 = P log(1+x) - x^2 J1 with P = x + x^2/2 + x^3/6, J1' = -J2, J2' = -2 J3.
  const double p0 = x + x * x / 2.0 + x * x * x / 6.0;
  const double p1 = 1.0 + x + x * x / 2.0;
  const double p2 = 1.0 + x;
  const double log_term = std::log1p(x);
  const double inv = 1.0 / (1.0 + x);
  const double j1 = j_integral(x, 1);
  switch (order) {
    case 0:
      return p0 * log_term - x * x * j1;
    case 1: {
      const double j2 = x > 0.0 ? j_integral(x, 2) : 0.0;
      return p1 * log_term + p0 * inv - 2.0 * x * j1 + x * x * j2;
    }
    default: {
      if (x == 0.0) return 2.0 - 2.0 * j1;
      const double j2 = j_integral(x, 2);
      const double j3 = j_integral(x, 3);
      return p2 * log_term + 2.0 * p1 * inv - p0 * inv * inv - 2.0 * j1 + 4.0 * x * j2 - 2.0 * x * x * j3;
    }
  }
}

}  // namespace cbsfs
