#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cbsfs/genealogy.hpp"
#include "cbsfs/tree.hpp"

namespace oracle {

/// Bit mask of the sample labels below each node.
inline std::vector<std::uint64_t> leaf_masks(const cbsfs::GenealogyTree& tree) {
  std::vector<std::uint64_t> mask(tree.size(), 0);
  for (const auto& node : tree.nodes()) {
    if (!node.leaf_label) continue;
    const std::uint64_t bit = std::uint64_t{1} << *node.leaf_label;
    for (int v = node.id; v != -1; v = tree.node(v).parent) mask[v] |= bit;
  }
  return mask;
}

/// Total length of the edges whose leaf set is exactly the individuals at
/// sorted positions j..l.
inline double block_length(const cbsfs::LeafConfig& config, const cbsfs::GenealogyTree& tree, int j, int l) {
  std::uint64_t want = 0;
  for (int k = j; k <= l; ++k) want |= std::uint64_t{1} << config.labels[k];
  const auto mask = leaf_masks(tree);
  double total = 0.0;
  for (int v = 0; v < tree.size(); ++v) {
    if (mask[v] == want) total += tree.edge_length(v);
  }
  return total;
}

/// True if every edge carries a set of consecutive individuals.
inline bool edges_are_consecutive(const cbsfs::LeafConfig& config, const cbsfs::GenealogyTree& tree) {
  std::vector<int> rank(config.n);
  for (int k = 1; k <= config.n; ++k) rank[config.labels[k]] = k;
  const auto mask = leaf_masks(tree);
  for (std::uint64_t m : mask) {
    int lo = config.n + 1, hi = 0, count = 0;
    for (int label = 0; label < config.n; ++label) {
      if (m >> label & 1) {
        lo = std::min(lo, rank[label]);
        hi = std::max(hi, rank[label]);
        ++count;
      }
    }
    if (count > 0 && hi - lo + 1 != count) return false;
  }
  return true;
}

/// E[log(1 + x / E)], E ~ Exp(1), by double-exponential quadrature.
inline double expected_log1p_ratio(double x) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([x](double e) { return std::exp(-e) * std::log1p(x / e); });
}

/// Integral over (0, inf) of an integrand that vanishes at infinity.
template <class F>
double half_line(F f) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([&f](double x) { return std::isfinite(x) ? f(x) : 0.0; });
}

/// Integral over (a, b).
template <class F>
double interval(F f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, a, b);
}

}  // namespace oracle
