#include "cbsfs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbsfs {

void RunningStats::push(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

double RunningStats::variance() const { return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1); }

McEstimate RunningStats::estimate() const {
  return {mean_, n_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_)), n_};
}

McEstimate summarize(std::span<const double> xs) {
  RunningStats s;
  for (double x : xs) s.push(x);
  return s.estimate();
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  return d;
}

double ks_critical(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

double ks_critical_two_sample(std::size_t n, std::size_t m) {
  const double a = static_cast<double>(n);
  const double b = static_cast<double>(m);
  return 1.63 * std::sqrt((a + b) / (a * b));
}

double chi_square_critical_01(int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_critical_01: dof must be >= 1");
  constexpr double z = 2.3263478740408408;  // standard normal upper 1%
  const double k = dof;
  const double c = 2.0 / (9.0 * k);
  const double t = 1.0 - c + z * std::sqrt(c);
  return k * t * t * t;
}

ChiSquareResult chi_square_homogeneity(std::span<const double> a, std::span<const double> b, double min_pooled) {
  if (a.size() != b.size()) throw std::invalid_argument("chi_square_homogeneity: bin count mismatch");
  std::vector<double> xa, xb;
  double ca = 0.0, cb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca += a[i];
    cb += b[i];
    if (ca + cb >= min_pooled) {
      xa.push_back(ca);
      xb.push_back(cb);
      ca = cb = 0.0;
    }
  }
  if (ca + cb > 0.0) {
    if (xa.empty()) {
      xa.push_back(ca);
      xb.push_back(cb);
    } else {
      xa.back() += ca;
      xb.back() += cb;
    }
  }
  double ta = 0.0, tb = 0.0;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    ta += xa[i];
    tb += xb[i];
  }
  ChiSquareResult r;
  r.dof = static_cast<int>(xa.size()) - 1;
  if (r.dof < 1 || ta == 0.0 || tb == 0.0) {
    r.dof = std::max(r.dof, 1);
    r.critical = chi_square_critical_01(r.dof);
    return r;
  }
  const double total = ta + tb;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    const double pooled = xa[i] + xb[i];
    const double ea = pooled * ta / total;
    const double eb = pooled * tb / total;
    r.statistic += (xa[i] - ea) * (xa[i] - ea) / ea + (xb[i] - eb) * (xb[i] - eb) / eb;
  }
  r.critical = chi_square_critical_01(r.dof);
  return r;
}

}  // namespace cbsfs
