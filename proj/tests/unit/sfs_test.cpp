#include <cmath>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <gtest/gtest.h>

#include "cbsfs/sfs.hpp"
#include "cbsfs/specfun.hpp"
#include "oracles.hpp"

using namespace cbsfs;

namespace {

// E[log(1 + x/E)] through E1 where that is well conditioned.
double phi_e1(double x) {
  if (x == 0.0) return 0.0;
  if (x < 1e-2 || x > 500.0) return oracle::expected_log1p_ratio(x);
  return std::log(x) + euler_gamma + std::exp(x) * boost::math::expint(1, x);
}

double s_ell_oracle(const ModelParams& p, int n, int ell, double z0) {
  const double v = oracle::interval(
      [&](double u) {
        return boost::math::ibeta_derivative(double(ell), double(n - ell + 1), u) * phi_e1(2 * p.theta * z0 * u);
      },
      0.0, 1.0);
  return v / p.rate();
}

}  // namespace

TEST(SEll, MatchesNestedQuadrature) {
  const ModelParams p{0.8, 1.5, 1.0};
  for (int n : {3, 12}) {
    for (int ell : {1, n / 2, n}) {
      for (double z0 : {0.3, 2.0}) {
        EXPECT_NEAR(s_ell(p, n, ell, z0) / s_ell_oracle(p, n, ell, z0), 1.0, 1e-9)
            << "n=" << n << " l=" << ell << " z0=" << z0;
      }
    }
  }
}

TEST(SEll, MonotoneAndAnchored) {
  const ModelParams p{};
  const auto s = s_all(p, 15, 1.0);
  ASSERT_EQ(s.size(), 16u);
  EXPECT_EQ(s[0], 0.0);
  for (int l = 1; l <= 15; ++l) EXPECT_GT(s[l], s[l - 1]);
  EXPECT_NEAR(s[15], s_ell(p, 15, 15, 1.0), 1e-15);
}

TEST(AveragedLogRatio, MatchesQuadrature) {
  for (double u : {0.01, 0.5, 0.9995, 1.0, 1.0007, 2.0, 30.0}) {
    const double want = oracle::half_line([u](double g) { return g * std::exp(-g) * phi_e1(g * u); });
    EXPECT_NEAR(averaged_log_ratio(u) / want, 1.0, 1e-9) << "u=" << u;
  }
}

TEST(AveragedLogRatio, SeriesMatchesClosedFormNearOne) {
  for (long double u : {1.0L - 0.999e-3L, 1.0L + 0.999e-3L}) {
    const long double e = u - 1.0L;
    const long double closed = u * (e + (u - 2.0L) * std::log(u)) / (e * e);
    EXPECT_NEAR(averaged_log_ratio(static_cast<double>(u)), static_cast<double>(closed), 1e-9);
  }
  EXPECT_DOUBLE_EQ(averaged_log_ratio(1.0), 1.5);
}

TEST(SAveraged, IntegratesConditionedValues) {
  const ModelParams p{1.0, 0.7, 1.0};
  const int n = 6;
  const auto avg = s_all_averaged(p, n);
  for (int ell : {1, 3, 6}) {
    const double want = oracle::half_line([&](double z) { return z0_density(p, z) * s_ell(p, n, ell, z); });
    EXPECT_NEAR(avg[ell] / want, 1.0, 1e-8) << ell;
  }
}

TEST(ExpectedSfs, TableMatchesPointwise) {
  const ModelParams p{1.0, 1.0, 2.0};
  const auto t = expected_sfs(p, 8, 1.5);
  ASSERT_EQ(t.entries.size(), 7u);
  for (const auto& e : t.entries) {
    EXPECT_NEAR(e.expected_L, expected_Lk(p, 8, e.k, 1.5), 1e-14);
    EXPECT_DOUBLE_EQ(e.expected_xi, p.mu * e.expected_L);
    EXPECT_GT(e.expected_L, 0.0);
  }
}

TEST(ExpectedSfs, ClosedRouteSimulationAgrees) {
  const ModelParams p{};
  const int n = 6;
  SimulationOptions o;
  o.seed = 12;
  const auto t = simulate_sfs(p, n, 1.0, 20000, o);
  for (const auto& e : t.entries) EXPECT_NEAR(*e.mc_mean, e.expected_xi, 4 * *e.mc_se) << "k=" << e.k;
}

TEST(ExpectedSfs, AveragedSimulationAgrees) {
  const ModelParams p{1.0, 2.0, 1.0};
  SimulationOptions o;
  o.seed = 13;
  const auto t = simulate_sfs(p, 5, std::nullopt, 20000, o);
  for (const auto& e : t.entries) EXPECT_NEAR(*e.mc_mean, e.expected_xi, 4 * *e.mc_se) << "k=" << e.k;
}

TEST(Simulation, TreeRouteEqualsClosedRoutePerReplicate) {
  const ModelParams p{};
  SimulationOptions closed, tree;
  closed.seed = tree.seed = 99;
  tree.route = LengthRoute::Tree;
  const auto a = simulate_lengths(p, 7, 0.8, 300, closed);
  const auto b = simulate_lengths(p, 7, 0.8, 300, tree);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int k = 1; k < 7; ++k) ASSERT_NEAR(a[i][k], b[i][k], 1e-12);
  }
}

TEST(Simulation, PoissonCountsHaveTheExpectedMean) {
  const ModelParams p{1.0, 1.0, 1.5};
  SimulationOptions o;
  o.seed = 5;
  o.mode = SfsMode::PoissonCounts;
  o.route = LengthRoute::Tree;
  const auto t = simulate_sfs(p, 5, 2.0, 20000, o);
  for (const auto& e : t.entries) EXPECT_NEAR(*e.mc_mean, e.expected_xi, 4 * *e.mc_se) << "k=" << e.k;
}

TEST(Simulation, WorkerCountDoesNotChangeResults) {
  const ModelParams p{};
  SimulationOptions a, b;
  a.seed = b.seed = 4;
  a.mode = b.mode = SfsMode::PoissonCounts;
  b.workers = 3;
  const auto x = simulate_sfs(p, 6, std::nullopt, 500, a);
  const auto y = simulate_sfs(p, 6, std::nullopt, 500, b);
  for (std::size_t i = 0; i < x.entries.size(); ++i) {
    EXPECT_EQ(*x.entries[i].mc_mean, *y.entries[i].mc_mean);
    EXPECT_EQ(*x.entries[i].mc_se, *y.entries[i].mc_se);
  }
}

TEST(G1, VanishesAtZeroAndDescribesLargeSamples) {
  EXPECT_EQ(g1(2.0, 0.0), 0.0);
  const ModelParams p{};
  const double z0 = 1.0;
  for (double u : {0.25, 0.5}) {
    double prev = INFINITY;
    for (int n : {40, 160, 640}) {
      const int k = static_cast<int>(std::lround(u * n));
      const double err = std::fabs(k * p.beta * expected_Lk(p, n, k, z0) / z0 - 1.0 - g1(p.theta * z0, u));
      EXPECT_LT(err, prev) << "u=" << u << " n=" << n;
      prev = err;
    }
    EXPECT_LT(prev, 5e-3);
  }
}

TEST(G1, CurveLayout) {
  const std::vector<double> zs{0.5, 2.0};
  const std::vector<double> us{0.0, 0.5, 1.0};
  const auto rows = g1_curve(zs, us);
  ASSERT_EQ(rows.size(), 3u);
  ASSERT_EQ(rows[0].size(), 2u);
  EXPECT_EQ(rows[0][0], 0.0);
  EXPECT_DOUBLE_EQ(rows[1][1], g1(2.0, 0.5));
  EXPECT_THROW(g1(1.0, 1.5), std::domain_error);
}

TEST(G2, ResidualDefinition) {
  const ModelParams p{};
  const int n = 30, k = 7;
  const double z0 = 2.0;
  const double want = (n * n / std::sqrt(k)) *
                      (p.beta * expected_Lk(p, n, k, z0) / z0 - 1.0 / k - g1(p.theta * z0, double(k) / n) / k);
  EXPECT_NEAR(g2_residual(p, n, k, z0), want, 1e-9 * std::fabs(want));
  EXPECT_NEAR(g2_all(p, n, z0)[k], want, 1e-9 * std::fabs(want));
}

TEST(MeanDensity, BranchPlusSpineDecomposition) {
  for (const ModelParams& p : {ModelParams{}, ModelParams{0.6, 1.8, 0.4}}) {
    for (double r : {0.1, 1.0, 5.0}) {
      const double parts = p.mu * (branch_term_quadrature(p, r) + spine_term_quadrature(p, r));
      EXPECT_NEAR(parts / mean_density(p, r), 1.0, 1e-8) << "r=" << r;
      EXPECT_NEAR(density_spine_check(p, r) / spine_term_closed(p, r), 1.0, 1e-8);
      EXPECT_NEAR(branch_term_quadrature(p, r) * p.beta * p.theta * r / std::exp(-2 * p.theta * r), 1.0, 1e-8);
    }
  }
}

TEST(MeanDensity, DirectFormula) {
  const ModelParams p{0.6, 1.8, 0.4};
  const double r = 0.7, x = 2 * p.theta * r;
  const double want =
      p.mu / p.beta * (std::exp(-x) / (p.theta * r) + std::exp(-x) + x * boost::math::expint(1, x));
  EXPECT_NEAR(mean_density(p, r) / want, 1.0, 1e-13);
}

TEST(MeanDensity, Asymptotes) {
  const ModelParams p{};
  EXPECT_NEAR(mean_density(p, 1e-7) * p.beta * p.theta * 1e-7 / p.mu, 1.0, 1e-5);
  double prev = INFINITY;
  for (double x : {40.0, 100.0, 400.0}) {
    const double r = x / (2 * p.theta);
    const double err = std::fabs(mean_density(p, r) * p.beta * std::exp(x) / (2 * p.mu) - 1.0);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(MeanDensity, CurveFollowsGrid) {
  const std::vector<double> grid{0.1, 0.2, 0.4};
  const auto c = density_curve(ModelParams{}, grid);
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_EQ(c.points[2].r, 0.4);
  EXPECT_GT(c.points[0].f, c.points[1].f);
}

TEST(G1, BoundedByULogU) {
  // |g1(z, u)| / (u (|log u| + 1)) settles to a z-dependent constant as u -> 0:
  // the change per decade shrinks.
  for (double z : {0.1, 1.0, 5.0, 20.0}) {
    double prev_ratio = NAN, prev_step = INFINITY;
    for (double u = 1e-4; u >= 1e-14; u /= 10) {
      const double ratio = std::fabs(g1(z, u)) / (u * (std::fabs(std::log(u)) + 1.0));
      ASSERT_TRUE(std::isfinite(ratio));
      if (!std::isnan(prev_ratio)) {
        const double step = std::fabs(ratio - prev_ratio);
        EXPECT_LT(step, prev_step) << "z=" << z << " u=" << u;
        prev_step = step;
      }
      prev_ratio = ratio;
    }
  }
}
