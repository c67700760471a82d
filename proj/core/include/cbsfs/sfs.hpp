#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cbsfs/model.hpp"

namespace cbsfs {

struct SfsEntry {
  int k = 0;
  double expected_L = 0.0;   ///< time units
  double expected_xi = 0.0;  ///< mutation counts, mu * expected_L
  std::optional<double> mc_mean;
  std::optional<double> mc_se;
};

struct SfsTable {
  int n = 0;
  std::vector<SfsEntry> entries;  ///< k = 1..n-1
};

struct DensityPoint {
  double r = 0.0;
  double f = 0.0;
};

struct DensityCurve {
  std::vector<DensityPoint> points;
};

/// S_l = E[zeta*(z0 U_(l))], U_(l) ~ Beta(l, n - l + 1); S_0 = 0.
double s_ell(const ModelParams& p, int n, int ell, double z0);

/// S_0..S_n.
std::vector<double> s_all(const ModelParams& p, int n, double z0);

/// S_0..S_n with Z_0 integrated against its Gamma(2, 2 theta) law.
std::vector<double> s_all_averaged(const ModelParams& p, int n);

/// E[log(1 + G u / E)] for G ~ Gamma(2, 1), E ~ Exp(1) independent.
double averaged_log_ratio(double u);

/// E[L_k | Z_0 = z0] = (n-k)(2S_k - S_{k-1} - S_{k+1}) + S_{k+1} - S_{k-1}.
double expected_Lk(const ModelParams& p, int n, int k, double z0);

/// Table of E[L_k | Z_0] and mu E[L_k | Z_0], k = 1..n-1.
SfsTable expected_sfs(const ModelParams& p, int n, double z0);

/// Same, unconditioned (averaged over the law of Z_0).
SfsTable expected_sfs_averaged(const ModelParams& p, int n);

/// SFS table from precomputed S_0..S_n.
SfsTable sfs_from_s(const ModelParams& p, std::span<const double> s);

/// First-order distortion of k E[xi_k] relative to 1/k; g1(z, 0) = 0.
double g1(double z, double u);

/// Rows u, columns z.
std::vector<std::vector<double>> g1_curve(std::span<const double> z_values, std::span<const double> u_grid);

/// g2 = (n^2 / sqrt k)(beta E[L_k | Z_0] / z0 - 1/k - g1(theta z0, k/n) / k).
double g2_residual(const ModelParams& p, int n, int k, double z0);

/// g2 for k = 1..n-1 (index k; entry 0 unused).
std::vector<double> g2_all(const ModelParams& p, int n, double z0);

enum class SfsMode { ExpectedLengths, PoissonCounts };
enum class LengthRoute { ClosedForm, Tree };

struct SimulationOptions {
  std::uint64_t seed = 1;
  unsigned workers = 1;
  SfsMode mode = SfsMode::ExpectedLengths;
  LengthRoute route = LengthRoute::ClosedForm;
};

/// Per-replicate lengths L_1..L_{n-1} (index k), same replicate seeding as
/// simulate_sfs.
std::vector<std::vector<double>> simulate_lengths(const ModelParams& p, int n, std::optional<double> z0,
                                                  std::size_t reps, const SimulationOptions& opt);

/// Monte-Carlo SFS. Fills mc_mean / mc_se of mu L_k (expected-lengths) or
/// of xi_k (poisson-counts); expected columns are the analytic values,
/// conditioned on z0 when given and averaged otherwise.
SfsTable simulate_sfs(const ModelParams& p, int n, std::optional<double> z0, std::size_t reps,
                      const SimulationOptions& opt);

/// Density of the mean frequency-spectrum measure,
/// (mu/beta)(e^{-2 theta r}/(theta r) + e^{-2 theta r} + 2 theta r Gamma(0, 2 theta r)).
double mean_density(const ModelParams& p, double r);

DensityCurve density_curve(const ModelParams& p, std::span<const double> grid);

/// (1/theta) int_0^inf q_t(r) dt by quadrature in t.
double branch_term_quadrature(const ModelParams& p, double r);

/// int_0^inf (1 - (1 - e^{-2 beta theta t})^2) e^{2 beta theta t} r q_t(r) dt by quadrature in t.
double spine_term_quadrature(const ModelParams& p, double r);

/// (2 theta / beta) r int_0^1 (1 + u)/u^2 e^{-2 theta r / u} du by quadrature.
double density_spine_check(const ModelParams& p, double r);

/// (1/beta)(e^{-2 theta r} + 2 theta r Gamma(0, 2 theta r)).
double spine_term_closed(const ModelParams& p, double r);

}  // namespace cbsfs
