#include "cbsfs/genealogy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cbsfs {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Sorts the spine (label 0 at position 0) together with the draws and fills
// the ends. Returns false on a tie.
bool assemble(LeafConfig& c, std::span<const double> draws) {
  const int n = static_cast<int>(draws.size()) + 1;
  std::vector<std::pair<double, int>> pts;
  pts.reserve(n);
  pts.emplace_back(0.0, 0);
  for (int k = 1; k < n; ++k) pts.emplace_back(draws[k - 1], k);
  std::sort(pts.begin(), pts.end());

  c.n = n;
  c.positions.assign(n + 2, 0.0);
  c.labels.assign(n + 2, -1);
  c.positions[0] = -c.e_g;
  c.positions[n + 1] = c.e_d;
  for (int k = 0; k < n; ++k) {
    c.positions[k + 1] = pts[k].first;
    c.labels[k + 1] = pts[k].second;
    if (pts[k].second == 0) c.spine_index = k + 1;
  }
  for (int k = 0; k <= n; ++k) {
    if (!(c.positions[k] < c.positions[k + 1])) return false;
  }
  return true;
}

void check_index(const LeafConfig& c, int j, int l, const char* fn) {
  if (j < 1 || l > c.n || j > l) {
    throw std::out_of_range(std::string(fn) + ": need 1 <= j <= l <= n (j=" + std::to_string(j) +
                            ", l=" + std::to_string(l) + ", n=" + std::to_string(c.n) + ")");
  }
}

// zeta with the +infinity convention at both ends.
double zeta_inf(const LeafConfig& c, const ZetaVector& z, int k) {
  return (k == 0 || k == c.n + 1) ? inf : z.zetas[k];
}

double window_max(const ZetaVector& z, int a, int b) {
  double m = 0.0;
  for (int k = a; k <= b; ++k) m = std::max(m, z.zetas[k]);
  return m;
}

}  // namespace

void LeafConfig::validate() const {
  if (n < 1) throw std::invalid_argument("LeafConfig: n must be >= 1");
  if (positions.size() != static_cast<std::size_t>(n + 2) || labels.size() != positions.size()) {
    throw std::invalid_argument("LeafConfig: expected n + 2 positions and labels");
  }
  if (!(e_g > 0.0) || !(e_d > 0.0)) throw std::invalid_argument("LeafConfig: e_g and e_d must be positive");
  if (positions.front() != -e_g || positions.back() != e_d) {
    throw std::invalid_argument("LeafConfig: interval ends must be -e_g and e_d");
  }
  if (std::fabs(z0 - (e_g + e_d)) > 1e-12 * z0) throw std::invalid_argument("LeafConfig: z0 != e_g + e_d");
  for (int k = 0; k <= n; ++k) {
    if (!(positions[k] < positions[k + 1])) throw std::invalid_argument("LeafConfig: positions not strictly increasing");
  }
  int zeros = 0;
  for (int k = 1; k <= n; ++k) zeros += positions[k] == 0.0;
  if (zeros != 1 || spine_index < 1 || spine_index > n || positions[spine_index] != 0.0 || labels[spine_index] != 0) {
    throw std::invalid_argument("LeafConfig: exactly one sample must sit at 0 with label 0");
  }
}

void ZetaVector::validate(const LeafConfig& config) const {
  if (zetas.size() != static_cast<std::size_t>(config.n + 2)) {
    throw std::invalid_argument("ZetaVector: expected n + 2 entries");
  }
  for (double z : zetas) {
    if (!(z >= 0.0) || !std::isfinite(z)) throw std::invalid_argument("ZetaVector: depths must be finite and >= 0");
  }
  if (zetas[config.spine_index] != 0.0) throw std::invalid_argument("ZetaVector: spine depth must be 0");
}

LeafConfig sample_population(const ModelParams& p, int n, Rng& rng, std::optional<double> condition_z0, int* redraws) {
  if (n < 1) throw std::invalid_argument("sample_population: n must be >= 1");
  if (condition_z0 && !(*condition_z0 > 0.0 && std::isfinite(*condition_z0))) {
    throw std::domain_error("sample_population: conditioned z0 must be positive");
  }
  std::vector<double> draws(n - 1);
  for (;;) {
    LeafConfig c;
    if (condition_z0) {
      c.z0 = *condition_z0;
      c.e_g = c.z0 * uniform01(rng);
      c.e_d = c.z0 - c.e_g;
    } else {
      c.e_g = exponential(rng, 2.0 * p.theta);
      c.e_d = exponential(rng, 2.0 * p.theta);
      c.z0 = c.e_g + c.e_d;
    }
    for (auto& x : draws) x = c.z0 * uniform01(rng) - c.e_g;
    if (c.e_g > 0.0 && c.e_d > 0.0 && assemble(c, draws)) return c;
    if (redraws) ++*redraws;
  }
}

LeafConfig make_leaf_config(double e_g, double e_d, std::span<const double> sample_positions) {
  LeafConfig c;
  c.e_g = e_g;
  c.e_d = e_d;
  c.z0 = e_g + e_d;
  if (!assemble(c, sample_positions)) throw std::invalid_argument("make_leaf_config: positions must be distinct and inside (-e_g, e_d)");
  c.validate();
  return c;
}

std::vector<double> intervals(const LeafConfig& c) {
  std::vector<double> out(c.n + 2, 0.0);
  for (int k = 0; k <= c.n + 1; ++k) {
    const double x = c.positions[k];
    if (x < 0.0) out[k] = c.positions[k + 1] - x;
    else if (x > 0.0) out[k] = x - c.positions[k - 1];
  }
  return out;
}

double sample_zeta_star(const ModelParams& p, double delta, Rng& rng) {
  if (!(delta >= 0.0)) throw std::domain_error("sample_zeta_star: delta must be >= 0");
  if (delta == 0.0) return 0.0;
  const double e = exponential(rng, 1.0);
  return std::log1p(2.0 * p.theta * delta / e) / p.rate();
}

ZetaVector sample_zetas(const ModelParams& p, const LeafConfig& config, Rng& rng) {
  ZetaVector z;
  const auto len = intervals(config);
  z.zetas.resize(len.size());
  for (std::size_t k = 0; k < len.size(); ++k) z.zetas[k] = sample_zeta_star(p, len[k], rng);
  return z;
}

AncestralPointMeasure ancestral_measure(const LeafConfig& config, const ZetaVector& zetas) {
  AncestralPointMeasure m;
  m.atoms.reserve(config.n);
  for (int k = 1; k <= config.n; ++k) m.atoms.push_back({config.positions[k], zetas.zetas[k]});
  return m;
}

double tmrca_consecutive(const LeafConfig& c, const ZetaVector& z, int j, int l) {
  check_index(c, j, l, "tmrca_consecutive");
  if (j == l) return 0.0;
  if (c.positions[j] > 0.0) return window_max(z, j + 1, l);
  if (c.positions[l] < 0.0) return window_max(z, j, l - 1);
  return window_max(z, j, l);
}

double admissible_length(const LeafConfig& c, const ZetaVector& z, int j, int l) {
  check_index(c, j, l, "admissible_length");
  if (l - j + 1 > c.n - 1) throw std::out_of_range("admissible_length: window must hold at most n - 1 individuals");
  const double mrca = tmrca_consecutive(c, z, j, l);
  double cap;
  if (c.positions[j] > 0.0) cap = std::min(zeta_inf(c, z, j), zeta_inf(c, z, l + 1));
  else if (c.positions[l] < 0.0) cap = std::min(zeta_inf(c, z, j - 1), zeta_inf(c, z, l));
  else cap = std::min(zeta_inf(c, z, j - 1), zeta_inf(c, z, l + 1));
  return std::max(cap - mrca, 0.0);
}

double lk_total(const LeafConfig& c, const ZetaVector& z, int k) {
  if (k < 1 || k > c.n - 1) throw std::out_of_range("lk_total: need 1 <= k <= n - 1");
  double sum = 0.0;
  for (int j = 1; j + k - 1 <= c.n; ++j) sum += admissible_length(c, z, j, j + k - 1);
  return sum;
}

std::vector<double> lk_all(const LeafConfig& c, const ZetaVector& z) {
  const int n = c.n;
  std::vector<double> out(n + 1, 0.0);
  for (int j = 1; j <= n; ++j) {
    // inner: max zeta_{j+1..l}; inner_prev: max zeta_{j+1..l-1}.
    double inner = 0.0;
    double inner_prev = 0.0;
    for (int l = j; l <= n && l - j + 1 <= n - 1; ++l) {
      inner_prev = inner;
      if (l > j) inner = std::max(inner, z.zetas[l]);
      double mrca = 0.0;
      double cap;
      if (c.positions[j] > 0.0) {
        if (l > j) mrca = inner;
        cap = std::min(zeta_inf(c, z, j), zeta_inf(c, z, l + 1));
      } else if (c.positions[l] < 0.0) {
        if (l > j) mrca = std::max(z.zetas[j], inner_prev);
        cap = std::min(zeta_inf(c, z, j - 1), zeta_inf(c, z, l));
      } else {
        if (l > j) mrca = std::max(z.zetas[j], inner);
        cap = std::min(zeta_inf(c, z, j - 1), zeta_inf(c, z, l + 1));
      }
      out[l - j + 1] += std::max(cap - mrca, 0.0);
    }
  }
  return out;
}

double population_tmrca(const ZetaVector& zetas) {
  return *std::max_element(zetas.zetas.begin(), zetas.zetas.end());
}

double population_tree_length(const ZetaVector& zetas) {
  const auto& z = zetas.zetas;
  return population_tmrca(zetas) + std::accumulate(z.begin() + 1, z.end() - 1, 0.0);
}

GenealogySample sample_genealogy(const ModelParams& p, int n, Rng& rng, std::optional<double> condition_z0) {
  GenealogySample s;
  s.config = sample_population(p, n, rng, condition_z0);
  s.zetas = sample_zetas(p, s.config, rng);
  return s;
}

}  // namespace cbsfs
