#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cbsfs/model.hpp"
#include "cbsfs/rng.hpp"

namespace cbsfs {

/// A sampled population interval [-e_g, e_d] with the n sample positions.
///
/// positions[0] = -e_g and positions[n+1] = e_d are the interval ends;
/// positions[1..n] are the sorted sample positions, one of which is the
/// spine individual at 0. labels[k] is the sample index of the individual at
/// positions[k] (0 for the spine, 1..n-1 for the uniform draws) and -1 at
/// the two ends.
struct LeafConfig {
  int n = 0;
  double e_g = 0.0;
  double e_d = 0.0;
  double z0 = 0.0;
  std::vector<double> positions;
  std::vector<int> labels;
  int spine_index = 0;

  /// Throws std::invalid_argument if the ordering or spine invariants fail.
  void validate() const;
};

/// Branch depths zeta_0..zeta_{n+1}; zeta at the spine index is 0.
struct ZetaVector {
  std::vector<double> zetas;

  void validate(const LeafConfig& config) const;
  double operator[](std::size_t k) const { return zetas[k]; }
};

struct AncestralAtom {
  double position = 0.0;
  double depth = 0.0;
};

/// Atoms (X_(k), zeta_k) for k = 1..n.
struct AncestralPointMeasure {
  std::vector<AncestralAtom> atoms;
};

/// Draws E_g, E_d ~ Exp(2 theta), or E_g ~ U(0, z), E_d = z - E_g when
/// conditioned on Z_0 = z, then the n - 1 uniform positions. A draw with
/// coinciding positions is discarded and redrawn; `redraws` counts those.
LeafConfig sample_population(const ModelParams& p, int n, Rng& rng, std::optional<double> condition_z0 = {},
                             int* redraws = nullptr);

/// Builds a configuration from explicit values. `sample_positions` are
/// X_1..X_{n-1} in sample-index order; X_0 = 0 is added.
LeafConfig make_leaf_config(double e_g, double e_d, std::span<const double> sample_positions);

/// Interval lengths I_0..I_{n+1}: the gap to the right of a negative
/// position, to the left of a positive one, 0 at the spine.
std::vector<double> intervals(const LeafConfig& config);

/// One draw of log(1 + 2 theta delta / E) / (2 beta theta), E ~ Exp(1).
double sample_zeta_star(const ModelParams& p, double delta, Rng& rng);

ZetaVector sample_zetas(const ModelParams& p, const LeafConfig& config, Rng& rng);

AncestralPointMeasure ancestral_measure(const LeafConfig& config, const ZetaVector& zetas);

/// Depth of the MRCA of the consecutive individuals j..l (1 <= j <= l <= n,
/// indices into the sorted positions).
double tmrca_consecutive(const LeafConfig& config, const ZetaVector& zetas, int j, int l);

/// Length of the part of the sample tree carried by exactly the individuals
/// j..l, with zeta_0 = zeta_{n+1} = +infinity. Requires l - j + 1 <= n - 1.
double admissible_length(const LeafConfig& config, const ZetaVector& zetas, int j, int l);

/// L_k = sum_j L_{j:j+k-1}, 1 <= k <= n - 1.
double lk_total(const LeafConfig& config, const ZetaVector& zetas, int k);

/// L_1..L_{n-1} in O(n^2); index k of the result, entries 0 and n are 0.
std::vector<double> lk_all(const LeafConfig& config, const ZetaVector& zetas);

/// max_{0..n+1} zeta + sum_{1..n} zeta: total length of the tree rooted at
/// the population MRCA.
double population_tree_length(const ZetaVector& zetas);

/// max_{0..n+1} zeta, the population TMRCA.
double population_tmrca(const ZetaVector& zetas);

struct GenealogySample {
  LeafConfig config;
  ZetaVector zetas;
};

GenealogySample sample_genealogy(const ModelParams& p, int n, Rng& rng, std::optional<double> condition_z0 = {});

}  // namespace cbsfs
