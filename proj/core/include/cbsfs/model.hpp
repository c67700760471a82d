#pragma once

#include <functional>

namespace cbsfs {

/// Parameters of the quadratic branching mechanism psi(u) = beta u^2 + 2 beta theta u
/// together with the per-lineage mutation rate.
struct ModelParams {
  double beta = 1.0;   ///< time-scaling diffusion coefficient, > 0
  double theta = 1.0;  ///< inverse population-size scale, > 0
  double mu = 1.0;     ///< mutation rate per unit branch length, >= 0

  /// Throws std::invalid_argument on non-positive beta/theta or negative mu.
  void validate() const;

  /// alpha = mu / (2 beta theta).
  double alpha() const { return mu / (2.0 * beta * theta); }

  /// 2 beta theta, the decay rate of N[Y_t].
  double rate() const { return 2.0 * beta * theta; }
};

/// c(t) = N[zeta > t] = 2 theta / (exp(2 beta theta t) - 1).
double extinction_tail(const ModelParams& p, double t);

/// u(t, lambda) = N[1 - exp(-lambda Y_t)].
double laplace_u(const ModelParams& p, double t, double lambda);

/// Density q_t(r) of Y_t under the canonical measure.
double canonical_density(const ModelParams& p, double t, double r);

/// E[N_t] = c(t) / theta, the mean number of non-spine ancestors at time -t.
double mean_ancestor_count(const ModelParams& p, double t);

/// P(A <= t | Z_0 = z) = exp(-c(t) z).
double tmrca_cdf(const ModelParams& p, double t, double z);

/// Stationary marginal of Z_0: Gamma(2, 2 theta).
double z0_density(const ModelParams& p, double z);
double z0_cdf(const ModelParams& p, double z);
double z0_moment(const ModelParams& p, int k);
double log_z0_moment(const ModelParams& p, int k);

/// E[h(Z^Kesten_t)] = exp(2 beta theta t) N[Y_t h(Y_t)], by quadrature.
/// Throws numeric_failure if the integral does not converge.
double kesten_expectation(const ModelParams& p, double t, const std::function<double(double)>& h);

}  // namespace cbsfs
