#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cbsfs/model.hpp"

namespace cbsfs {

struct MomentReport {
  int n = 0;
  double analytic = 0.0;
  std::optional<double> mc_mean;
  std::optional<double> mc_se;
  std::optional<std::size_t> reps;
};

/// U(k, a) = E[U^{alpha + a} (1 - U^{1 + alpha})^{k - 1}] = beta(k, 1 + a/(1+alpha)) / (1 + alpha).
double u_moment(double alpha, int k, double a);

/// E[Z_cl^{n-1} R] / E[Z_0^{n-1}]; 1 at alpha = 0.
double zcl_pow_r_ratio(double alpha, int n);
/// Same ratio times (1 + alpha)^n, free of underflow for large n.
double zcl_pow_r_scaled(double alpha, int n);
double e_zcl_pow_r(const ModelParams& p, int n);

/// E[Z_cl^n] / E[Z_0^n]; 1 at alpha = 0.
double zcl_pow_ratio(double alpha, int n);
/// Same ratio times (1 + alpha)^n.
double zcl_pow_scaled(double alpha, int n);
double e_zcl_pow(const ModelParams& p, int n);
double log_e_zcl_pow(const ModelParams& p, int n);

/// Limit of zcl_pow_scaled(alpha, n) n^{alpha/(1+alpha)} as n grows:
/// 2 alpha / (2 + alpha) Gamma(alpha / (1 + alpha)).
double zcl_asymptotic_constant(double alpha);

struct ClonalSummary {
  double e_r = 0.0;
  double e_zcl = 0.0;
  double cov_r_z0 = 0.0;
  double claimed_corr = 0.0;  ///< -1 + 3/(alpha + 3), as usually quoted
  std::string corr_note;
};

ClonalSummary clonal_summary(const ModelParams& p);

enum class ClonalStatistic {
  ZpowR,  ///< Z_0^{n-1} e^{-mu L_n}, mean E[Z_cl^{n-1} R]
  Zpow,   ///< Z_0^n e^{-mu L_n}, mean E[Z_cl^n]
};

/// Tree Monte Carlo: unconditioned genealogies rooted at the population
/// MRCA, reps >= 100.
MomentReport mc_clonal(const ModelParams& p, int n, std::size_t reps, std::uint64_t seed, unsigned workers,
                       ClonalStatistic statistic);

/// Monte Carlo over independent uniforms V_1..V_{n+1} of
/// min_k V_k^alpha prod_{j=2..n} V_j^alpha, scaled by E[Z_0^{n-1}]
/// (ZpowR). For Zpow, V_k = E'_k / (E_k + E'_k) with exponentials and the
/// weight is multiplied by sum_k E_k / (n + 1).
MomentReport v_representation_check(const ModelParams& p, int n, std::size_t reps, std::uint64_t seed,
                                     unsigned workers, ClonalStatistic statistic = ClonalStatistic::ZpowR);

struct CorrelationCheck {
  double alpha = 0.0;
  double claimed = 0.0;     ///< -1 + 3/(alpha + 3)
  double e_r2 = 0.0;        ///< MC estimate of E[R^2] = E[e^{-mu L_2}]
  double e_r2_se = 0.0;
  double implied = 0.0;     ///< Cov / sqrt(Var(R) Var(Z_0)) with the MC Var(R)
  double implied_se = 0.0;  ///< delta-method standard error
  bool consistent = false;  ///< |implied - claimed| <= 3 implied_se
};

/// Checks the quoted Corr(R, Z_0) against the closed-form covariance and a
/// Monte-Carlo estimate of Var(R).
CorrelationCheck check_correlation_claim(const ModelParams& p, std::size_t reps, std::uint64_t seed,
                                         unsigned workers);

}  // namespace cbsfs
