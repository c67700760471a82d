#include "cbsfs/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cbsfs/quadrature.hpp"

namespace cbsfs {

namespace {

void require_positive(const char* fn, const char* what, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(fn) + ": " + what + " must be positive and finite (got " +
                            std::to_string(v) + ")");
  }
}

}  // namespace

void ModelParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("ModelParams: beta must be > 0");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("ModelParams: theta must be > 0");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("ModelParams: mu must be >= 0");
}

double extinction_tail(const ModelParams& p, double t) {
  require_positive("extinction_tail", "t", t);
  const double a = p.rate() * t;
  if (a > 1.0) {
    // 2 theta e^-a / (1 - e^-a); no overflow for large t.
    return 2.0 * p.theta * std::exp(-a) / -std::expm1(-a);
  }
  return 2.0 * p.theta / std::expm1(a);
}

double laplace_u(const ModelParams& p, double t, double lambda) {
  require_positive("laplace_u", "t", t);
  if (!(lambda >= 0.0)) throw std::domain_error("laplace_u: lambda must be >= 0");
  if (lambda == 0.0) return 0.0;
  const double a = p.rate() * t;
  // 2 theta lambda / ((2 theta + lambda) e^a - lambda), divided through by e^a.
  const double s = -std::expm1(-a);
  if (std::isinf(lambda)) return extinction_tail(p, t);
  return 2.0 * p.theta * lambda * std::exp(-a) / (2.0 * p.theta + lambda * s);
}

double canonical_density(const ModelParams& p, double t, double r) {
  require_positive("canonical_density", "t", t);
  require_positive("canonical_density", "r", r);
  const double a = p.rate() * t;
  const double s = -std::expm1(-a);
  return 4.0 * p.theta * p.theta * std::exp(-a - 2.0 * p.theta * r / s) / (s * s);
}

double mean_ancestor_count(const ModelParams& p, double t) { return extinction_tail(p, t) / p.theta; }

double tmrca_cdf(const ModelParams& p, double t, double z) {
  require_positive("tmrca_cdf", "z", z);
  return std::exp(-extinction_tail(p, t) * z);
}

double z0_density(const ModelParams& p, double z) {
  require_positive("z0_density", "z", z);
  const double rate = 2.0 * p.theta;
  return rate * rate * z * std::exp(-rate * z);
}

double z0_cdf(const ModelParams& p, double z) {
  if (!(z >= 0.0)) throw std::domain_error("z0_cdf: z must be >= 0");
  const double x = 2.0 * p.theta * z;
  return -std::expm1(-x) - x * std::exp(-x);
}

double log_z0_moment(const ModelParams& p, int k) {
  if (k < 0) throw std::domain_error("z0_moment: k must be >= 0");
  return std::lgamma(k + 2.0) - k * std::log(2.0 * p.theta);
}

double z0_moment(const ModelParams& p, int k) {
  if (k < 0) throw std::domain_error("z0_moment: k must be >= 0");
  // (k+1)! / (2 theta)^k; exact product for small k.
  if (k <= 20) {
    double v = 1.0;
    const double scale = 1.0 / (2.0 * p.theta);
    for (int i = 1; i <= k; ++i) v *= (i + 1) * scale;
    return v;
  }
  return std::exp(log_z0_moment(p, k));
}

double kesten_expectation(const ModelParams& p, double t, const std::function<double(double)>& h) {
  require_positive("kesten_expectation", "t", t);
  // With r = s v / (2 theta), s = 1 - e^{-2 beta theta t}:
  // e^{2 beta theta t} int r q_t(r) h(r) dr = int_0^inf v e^{-v} h(s v / (2 theta)) dv.
  const double s = -std::expm1(-p.rate() * t);
  const double scale = s / (2.0 * p.theta);
  auto g = [&](double v) { return v * std::exp(-v) * h(scale * v); };
  QuadratureSpec spec;
  spec.abs_tol = 1e-14;
  spec.rel_tol = 1e-12;
  return integrate_tail(g, 0.0, spec);
}

}  // namespace cbsfs
