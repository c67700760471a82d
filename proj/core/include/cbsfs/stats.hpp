#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cbsfs {

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;  ///< standard error of the mean
  std::size_t count = 0;
};

/// Welford accumulator.
class RunningStats {
 public:
  void push(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  ///< unbiased; 0 for fewer than two samples
  McEstimate estimate() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

McEstimate summarize(std::span<const double> xs);

/// One-sample Kolmogorov-Smirnov distance sup |F_n - F|.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic critical values at level 0.01.
double ks_critical(std::size_t n);
double ks_critical_two_sample(std::size_t n, std::size_t m);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double critical = 0.0;  ///< upper 1% point
};

/// Homogeneity test of two count histograms over the same bins. Bins with
/// a pooled count below `min_pooled` are merged into their neighbour.
ChiSquareResult chi_square_homogeneity(std::span<const double> a, std::span<const double> b,
                                       double min_pooled = 10.0);

/// Upper 1% quantile of chi-square with `dof` degrees of freedom
/// (Wilson-Hilferty).
double chi_square_critical_01(int dof);

}  // namespace cbsfs
