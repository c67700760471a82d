#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "cbsfs/rng.hpp"
#include "cbsfs/stats.hpp"

using namespace cbsfs;

TEST(Substream, DependsOnlyOnSeedAndIndex) {
  Rng a = substream(7, 3), b = substream(7, 3), c = substream(7, 4), d = substream(8, 3);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

TEST(RunReplicates, IdenticalForEveryWorkerCount) {
  auto draw = [](Rng& rng, std::size_t i) { return uniform01(rng) + static_cast<double>(i); };
  const auto one = run_replicates<double>(1001, 1, 42, draw);
  for (unsigned w : {2u, 3u, 8u, 5000u}) EXPECT_EQ(one, run_replicates<double>(1001, w, 42, draw));
}

TEST(RunReplicates, PropagatesExceptions) {
  auto fn = [](Rng&, std::size_t i) -> int {
    if (i == 17) throw std::runtime_error("boom");
    return 0;
  };
  EXPECT_THROW(run_replicates<int>(50, 3, 1, fn), std::runtime_error);
}

TEST(Uniform01, OpenInterval) {
  Rng rng = substream(1, 0);
  RunningStats s;
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    s.push(u);
  }
  EXPECT_NEAR(s.mean(), 0.5, 4 * std::sqrt(1.0 / 12 / 1e5));
}

TEST(Poisson, MeanAndZero) {
  Rng rng = substream(2, 0);
  EXPECT_EQ(poisson(rng, 0.0), 0);
  RunningStats s;
  for (int i = 0; i < 50000; ++i) s.push(static_cast<double>(poisson(rng, 3.5)));
  EXPECT_NEAR(s.mean(), 3.5, 4 * s.estimate().se);
  EXPECT_NEAR(s.variance(), 3.5, 0.15);
}

TEST(RunningStats, MatchesTwoPass) {
  const std::vector<double> xs{1.0, 4.0, 4.5, -2.0, 10.0, 3.25};
  const auto e = summarize(xs);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  EXPECT_NEAR(e.mean, mean, 1e-14);
  EXPECT_NEAR(e.se, std::sqrt(ss / (xs.size() - 1) / xs.size()), 1e-14);
  EXPECT_EQ(e.count, xs.size());
}

TEST(KolmogorovSmirnov, ExactSmallSample) {
  // F(x) = x on [0,1]; sample {0.1, 0.5, 0.7}: D = max(1/3-0.1, 0.5-1/3, 2/3-0.5, 1-0.7, 0.7-2/3).
  EXPECT_NEAR(ks_statistic({0.7, 0.1, 0.5}, [](double x) { return x; }), 0.3, 1e-15);
  EXPECT_NEAR(ks_two_sample({1, 2, 3}, {1.5, 2.5, 3.5}), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(ks_critical(10000), 0.0163, 1e-12);
}

TEST(KolmogorovSmirnov, UniformSamplePasses) {
  std::vector<double> xs;
  Rng rng = substream(9, 0);
  for (int i = 0; i < 20000; ++i) xs.push_back(uniform01(rng));
  EXPECT_LT(ks_statistic(xs, [](double x) { return x; }), ks_critical(xs.size()));
}

TEST(ChiSquare, CriticalValues) {
  // Upper 1% points: 6.635 (1), 23.209 (10), 76.154 (50).
  EXPECT_NEAR(chi_square_critical_01(10), 23.209, 0.05);
  EXPECT_NEAR(chi_square_critical_01(50), 76.154, 0.05);
}

TEST(ChiSquare, HomogeneityDetectsShift) {
  const std::vector<double> a{100, 200, 300, 200, 100, 2, 1};
  const std::vector<double> b{105, 190, 310, 195, 100, 1, 3};
  const std::vector<double> c{200, 200, 200, 200, 100, 1, 3};
  const auto same = chi_square_homogeneity(a, b);
  EXPECT_LT(same.statistic, same.critical);
  EXPECT_EQ(same.dof, 4);  // the two sparse tail bins merge into their neighbour
  const auto diff = chi_square_homogeneity(a, c);
  EXPECT_GT(diff.statistic, diff.critical);
}
