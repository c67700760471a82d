#include "cbsfs/sfs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cbsfs/genealogy.hpp"
#include "cbsfs/quadrature.hpp"
#include "cbsfs/rng.hpp"
#include "cbsfs/specfun.hpp"
#include "cbsfs/stats.hpp"
#include "cbsfs/tree.hpp"

namespace cbsfs {

namespace {

QuadratureSpec tight() {
  QuadratureSpec s;
  s.abs_tol = 1e-15;
  s.rel_tol = 1e-13;
  s.max_subdivisions = 4000;
  return s;
}

void check_nk(int n, int k, const char* fn) {
  if (n < 2) throw std::domain_error(std::string(fn) + ": n must be >= 2");
  if (k < 1 || k > n - 1) throw std::out_of_range(std::string(fn) + ": need 1 <= k <= n - 1");
}

// E[g(U)] for U ~ Beta(a, b), integer a, b >= 1. Cuts around the mode keep
// the sharp peak of large-n order statistics resolved.
template <class G>
double beta_expectation(int a, int b, G g) {
  const double lognorm = -log_beta(a, b);
  auto integrand = [&](double u) {
    double lw = lognorm;
    if (a > 1) lw += (a - 1) * std::log(u);
    if (b > 1) lw += (b - 1) * std::log1p(-u);
    return std::exp(lw) * g(u);
  };
  const double ab = a + b;
  const double mode = ab > 2 ? (a - 1) / (ab - 2) : 0.5;
  const double sd = std::sqrt(a * static_cast<double>(b) / (ab * ab * (ab + 1)));
  std::vector<double> cuts;
  for (double m : {-12.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0}) {
    const double c = mode + m * sd;
    if (c > 1e-12 && c < 1.0 - 1e-12) cuts.push_back(c);
  }
  return integrate(integrand, 0.0, 1.0, tight(), cuts);
}

double lk_from_s(std::span<const double> s, int n, int k) {
  return (n - k) * (2.0 * s[k] - s[k - 1] - s[k + 1]) + s[k + 1] - s[k - 1];
}

}  // namespace

double s_ell(const ModelParams& p, int n, int ell, double z0) {
  if (n < 1 || ell < 0 || ell > n) throw std::out_of_range("s_ell: need 0 <= ell <= n");
  if (!(z0 > 0.0)) throw std::domain_error("s_ell: z0 must be positive");
  if (ell == 0) return 0.0;
  const double scale = 2.0 * p.theta * z0;
  return beta_expectation(ell, n - ell + 1, [scale](double u) { return expected_log1p_ratio(scale * u); }) / p.rate();
}

std::vector<double> s_all(const ModelParams& p, int n, double z0) {
  std::vector<double> s(n + 1, 0.0);
  for (int l = 1; l <= n; ++l) s[l] = s_ell(p, n, l, z0);
  return s;
}

double averaged_log_ratio(double u) {
  if (!(u >= 0.0)) throw std::domain_error("averaged_log_ratio: u must be >= 0");
  if (u == 0.0) return 0.0;
  const double e = u - 1.0;
  if (std::fabs(e) < 1e-3) return 1.5 + e * (2.0 / 3 + e * (-0.25 + e * (2.0 / 15 - e / 12)));
  return u * (e + (u - 2.0) * std::log(u)) / (e * e);
}

std::vector<double> s_all_averaged(const ModelParams& p, int n) {
  if (n < 1) throw std::out_of_range("s_all_averaged: n must be >= 1");
  std::vector<double> s(n + 1, 0.0);
  for (int l = 1; l <= n; ++l) s[l] = beta_expectation(l, n - l + 1, averaged_log_ratio) / p.rate();
  return s;
}

double expected_Lk(const ModelParams& p, int n, int k, double z0) {
  check_nk(n, k, "expected_Lk");
  if (!(z0 > 0.0)) throw std::domain_error("expected_Lk: z0 must be positive");
  std::vector<double> s(n + 1, 0.0);
  for (int l = std::max(1, k - 1); l <= k + 1; ++l) s[l] = s_ell(p, n, l, z0);
  return lk_from_s(s, n, k);
}

SfsTable sfs_from_s(const ModelParams& p, std::span<const double> s) {
  SfsTable t;
  t.n = static_cast<int>(s.size()) - 1;
  for (int k = 1; k <= t.n - 1; ++k) {
    SfsEntry e;
    e.k = k;
    e.expected_L = lk_from_s(s, t.n, k);
    e.expected_xi = p.mu * e.expected_L;
    t.entries.push_back(e);
  }
  return t;
}

SfsTable expected_sfs(const ModelParams& p, int n, double z0) {
  check_nk(n, 1, "expected_sfs");
  return sfs_from_s(p, s_all(p, n, z0));
}

SfsTable expected_sfs_averaged(const ModelParams& p, int n) {
  check_nk(n, 1, "expected_sfs_averaged");
  return sfs_from_s(p, s_all_averaged(p, n));
}

double g1(double z, double u) {
  if (!(z > 0.0)) throw std::domain_error("g1: z must be positive");
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("g1: u must lie in [0, 1]");
  if (u < 1e-300) return 0.0;
  const double lu = std::log(u);
  const double l2z = std::log(2.0 * z);
  const double x = 2.0 * z * u;
  const double line1 = u * (-2.0 * lu - 1.0 - 2.0 * euler_gamma - 2.0 * l2z);
  const double line2 = z * u * (2.0 * (1.0 - 3.0 * u) * (lu + l2z) + 11.0 / 3.0 - 7.0 * u);
  const double line3 = (2.0 / 3.0) * z * z * u * u * (6.0 * (1.0 - 2.0 * u) * (lu + l2z) + 5.0 - 7.0 * u);
  const double line4 = 2.0 * u * h1_deriv(x, 1) - 2.0 * z * u * (1.0 - u) * h1_deriv(x, 2);
  return line1 + line2 + line3 + line4;
}

std::vector<std::vector<double>> g1_curve(std::span<const double> z_values, std::span<const double> u_grid) {
  std::vector<std::vector<double>> rows;
  rows.reserve(u_grid.size());
  for (double u : u_grid) {
    std::vector<double> row;
    for (double z : z_values) row.push_back(g1(z, u));
    rows.push_back(std::move(row));
  }
  return rows;
}

double g2_residual(const ModelParams& p, int n, int k, double z0) {
  check_nk(n, k, "g2_residual");
  const double lk = expected_Lk(p, n, k, z0);
  const double kd = k;
  return (static_cast<double>(n) * n / std::sqrt(kd)) *
         (p.beta * lk / z0 - 1.0 / kd - g1(p.theta * z0, kd / n) / kd);
}

std::vector<double> g2_all(const ModelParams& p, int n, double z0) {
  check_nk(n, 1, "g2_all");
  const auto s = s_all(p, n, z0);
  std::vector<double> out(n, 0.0);
  for (int k = 1; k <= n - 1; ++k) {
    const double kd = k;
    out[k] = (static_cast<double>(n) * n / std::sqrt(kd)) *
             (p.beta * lk_from_s(s, n, k) / z0 - 1.0 / kd - g1(p.theta * z0, kd / n) / kd);
  }
  return out;
}

std::vector<std::vector<double>> simulate_lengths(const ModelParams& p, int n, std::optional<double> z0,
                                                  std::size_t reps, const SimulationOptions& opt) {
  check_nk(n, 1, "simulate_lengths");
  return run_replicates<std::vector<double>>(reps, opt.workers, opt.seed, [&](Rng& rng, std::size_t) {
    const auto g = sample_genealogy(p, n, rng, z0);
    if (opt.route == LengthRoute::ClosedForm) return lk_all(g.config, g.zetas);
    auto lengths = build_tree(g.config, g.zetas, RootMode::SampleMrca).length_by_carriers();
    lengths[0] = lengths[n] = 0.0;
    return lengths;
  });
}

SfsTable simulate_sfs(const ModelParams& p, int n, std::optional<double> z0, std::size_t reps,
                      const SimulationOptions& opt) {
  check_nk(n, 1, "simulate_sfs");
  if (reps < 1) throw std::invalid_argument("simulate_sfs: reps must be >= 1");
  p.validate();

  const auto rows = run_replicates<std::vector<double>>(reps, opt.workers, opt.seed, [&](Rng& rng, std::size_t) {
    const auto g = sample_genealogy(p, n, rng, z0);
    std::vector<double> out(n + 1, 0.0);
    if (opt.route == LengthRoute::ClosedForm) {
      const auto lk = lk_all(g.config, g.zetas);
      for (int k = 1; k < n; ++k) {
        out[k] = opt.mode == SfsMode::ExpectedLengths ? p.mu * lk[k] : static_cast<double>(poisson(rng, p.mu * lk[k]));
      }
      return out;
    }
    const auto tree = build_tree(g.config, g.zetas, RootMode::SampleMrca);
    if (opt.mode == SfsMode::ExpectedLengths) {
      const auto lk = tree.length_by_carriers();
      for (int k = 1; k < n; ++k) out[k] = p.mu * lk[k];
    } else {
      const auto xi = overlay_sfs(tree, drop_mutations(tree, p, rng));
      for (int k = 1; k < n; ++k) out[k] = static_cast<double>(xi[k]);
    }
    return out;
  });

  SfsTable table = z0 ? expected_sfs(p, n, *z0) : expected_sfs_averaged(p, n);
  std::vector<RunningStats> acc(n + 1);
  for (const auto& row : rows) {
    for (int k = 1; k < n; ++k) acc[k].push(row[k]);
  }
  for (auto& e : table.entries) {
    const auto est = acc[e.k].estimate();
    e.mc_mean = est.mean;
    e.mc_se = est.se;
  }
  return table;
}

double mean_density(const ModelParams& p, double r) {
  if (!(r > 0.0)) throw std::domain_error("mean_density: r must be positive");
  const double x = 2.0 * p.theta * r;
  return (p.mu / p.beta) * std::exp(-x) * (1.0 / (p.theta * r) + 1.0 + x * scaled_gamma_upper_zero(x));
}

DensityCurve density_curve(const ModelParams& p, std::span<const double> grid) {
  DensityCurve c;
  c.points.reserve(grid.size());
  for (double r : grid) c.points.push_back({r, mean_density(p, r)});
  return c;
}

namespace {

std::vector<double> time_cuts(const ModelParams& p, double r) {
  std::vector<double> cuts;
  for (double m : {0.05, 0.2, 1.0, 5.0}) cuts.push_back(m * r / p.beta);
  for (double m : {1.0, 5.0}) cuts.push_back(m / p.rate());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace

double branch_term_quadrature(const ModelParams& p, double r) {
  if (!(r > 0.0)) throw std::domain_error("branch_term_quadrature: r must be positive");
  auto g = [&](double t) { return canonical_density(p, t, r); };
  QuadratureSpec spec;
  spec.abs_tol = 1e-16;
  spec.rel_tol = 1e-12;
  return integrate_tail(g, 0.0, spec, time_cuts(p, r)) / p.theta;
}

double spine_term_quadrature(const ModelParams& p, double r) {
  if (!(r > 0.0)) throw std::domain_error("spine_term_quadrature: r must be positive");
  auto g = [&](double t) {
    const double a = p.rate() * t;
    if (a > 600.0) return 0.0;
    const double s = -std::expm1(-a);
    return (1.0 - s * s) * std::exp(a) * r * canonical_density(p, t, r);
  };
  QuadratureSpec spec;
  spec.abs_tol = 1e-16;
  spec.rel_tol = 1e-12;
  return integrate_tail(g, 0.0, spec, time_cuts(p, r));
}

double density_spine_check(const ModelParams& p, double r) {
  if (!(r > 0.0)) throw std::domain_error("density_spine_check: r must be positive");
  const double x = 2.0 * p.theta * r;
  auto g = [x](double u) { return (1.0 + u) / (u * u) * std::exp(-x / u); };
  std::vector<double> cuts;
  for (double m : {0.1, 0.3, 1.0, 3.0}) {
    if (m * x < 1.0) cuts.push_back(m * x);
  }
  QuadratureSpec spec;
  spec.abs_tol = 1e-300;
  spec.rel_tol = 1e-12;
  return (2.0 * p.theta / p.beta) * r * integrate(g, 0.0, 1.0, spec, cuts);
}

double spine_term_closed(const ModelParams& p, double r) {
  if (!(r > 0.0)) throw std::domain_error("spine_term_closed: r must be positive");
  const double x = 2.0 * p.theta * r;
  return std::exp(-x) * (1.0 + x * scaled_gamma_upper_zero(x)) / p.beta;
}

}  // namespace cbsfs
