#include <cmath>

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "cbsfs/model.hpp"
#include "oracles.hpp"

using namespace cbsfs;

namespace {
const ModelParams kDefault{};
const ModelParams kSkewed{0.7, 2.5, 0.3};
}  // namespace

TEST(ModelParams, Validation) {
  EXPECT_NO_THROW(kDefault.validate());
  EXPECT_THROW((ModelParams{0.0, 1.0, 1.0}).validate(), std::invalid_argument);
  EXPECT_THROW((ModelParams{1.0, -1.0, 1.0}).validate(), std::invalid_argument);
  EXPECT_THROW((ModelParams{1.0, 1.0, -0.1}).validate(), std::invalid_argument);
  EXPECT_NO_THROW((ModelParams{1.0, 1.0, 0.0}).validate());
  EXPECT_DOUBLE_EQ(kSkewed.alpha(), 0.3 / (2 * 0.7 * 2.5));
}

TEST(ExtinctionTail, ClosedForm) {
  for (const auto& p : {kDefault, kSkewed}) {
    for (double t : {1e-4, 0.3, 2.0, 15.0}) {
      const double want = 2 * p.theta / std::expm1(2 * p.beta * p.theta * t);
      EXPECT_NEAR(extinction_tail(p, t) / want, 1.0, 1e-14);
    }
  }
}

TEST(CanonicalDensity, MassAndMean) {
  for (const auto& p : {kDefault, kSkewed}) {
    for (double t : {0.2, 1.0, 3.0}) {
      const double mass = oracle::half_line([&](double r) { return canonical_density(p, t, r); });
      const double mean = oracle::half_line([&](double r) { return r * canonical_density(p, t, r); });
      EXPECT_NEAR(mass / extinction_tail(p, t), 1.0, 1e-10);
      EXPECT_NEAR(mean / std::exp(-p.rate() * t), 1.0, 1e-10);
    }
  }
}

TEST(LaplaceExponent, MatchesCanonicalMeasure) {
  for (const auto& p : {kDefault, kSkewed}) {
    for (double t : {0.3, 1.5}) {
      for (double lambda : {0.1, 1.0, 25.0}) {
        const double want =
            oracle::half_line([&](double r) { return -std::expm1(-lambda * r) * canonical_density(p, t, r); });
        EXPECT_NEAR(laplace_u(p, t, lambda) / want, 1.0, 1e-10);
      }
      EXPECT_NEAR(laplace_u(p, t, 1e12) / extinction_tail(p, t), 1.0, 1e-6);
    }
  }
}

TEST(LaplaceExponent, SolvesBackwardEquation) {
  // du/dt = -psi(u) = -(beta u^2 + 2 beta theta u)
  const auto& p = kSkewed;
  const double t = 0.4, lambda = 3.0, h = 1e-5;
  const double du = (laplace_u(p, t + h, lambda) - laplace_u(p, t - h, lambda)) / (2 * h);
  const double u = laplace_u(p, t, lambda);
  EXPECT_NEAR(du, -(p.beta * u * u + 2 * p.beta * p.theta * u), 1e-7);
}

TEST(StationaryLaw, GammaTwo) {
  const auto& p = kSkewed;
  const double rate = 2 * p.theta;
  for (double z : {0.01, 0.4, 2.0}) {
    EXPECT_NEAR(z0_cdf(p, z), boost::math::gamma_p(2.0, rate * z), 1e-14);
    EXPECT_NEAR(z0_density(p, z), rate * rate * z * std::exp(-rate * z), 1e-13);
  }
  for (int k : {0, 1, 2, 5, 40}) {
    const double want = boost::math::factorial<double>(k + 1) / std::pow(rate, k);
    EXPECT_NEAR(z0_moment(p, k) / want, 1.0, 1e-12) << "k=" << k;
    EXPECT_NEAR(log_z0_moment(p, k), std::log(want), 1e-12);
  }
}

TEST(TmrcaLaw, CdfShape) {
  const auto& p = kDefault;
  EXPECT_NEAR(tmrca_cdf(p, 1.0, 2.0), std::exp(-2.0 * extinction_tail(p, 1.0)), 1e-15);
  EXPECT_LT(tmrca_cdf(p, 0.1, 1.0), tmrca_cdf(p, 0.2, 1.0));
  EXPECT_NEAR(tmrca_cdf(p, 40.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(mean_ancestor_count(p, 0.7), extinction_tail(p, 0.7) / p.theta, 1e-15);
}

TEST(SizeBiasedLaw, NormalisedAndMean) {
  for (const auto& p : {kDefault, kSkewed}) {
    for (double t : {0.5, 2.0}) {
      EXPECT_NEAR(kesten_expectation(p, t, [](double) { return 1.0; }), 1.0, 1e-10);
      const double want =
          std::exp(p.rate() * t) * oracle::half_line([&](double r) { return r * r * canonical_density(p, t, r); });
      EXPECT_NEAR(kesten_expectation(p, t, [](double y) { return y; }) / want, 1.0, 1e-9);
    }
  }
}
