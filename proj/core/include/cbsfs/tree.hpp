#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cbsfs/genealogy.hpp"
#include "cbsfs/model.hpp"
#include "cbsfs/rng.hpp"

namespace cbsfs {

enum class RootMode {
  SampleMrca,      ///< rooted at the MRCA of the sample
  PopulationMrca,  ///< spine extended down to the MRCA of the whole population
};

struct TreeNode {
  int id = 0;
  double time = 0.0;  ///< 0 at leaves, negative below
  int parent = -1;    ///< -1 for the root
  std::optional<int> leaf_label;
};

/// Rooted tree as a parent-pointer node list. Immutable after construction.
class GenealogyTree {
 public:
  GenealogyTree() = default;
  /// Validates; throws std::invalid_argument on a malformed node list.
  GenealogyTree(std::vector<TreeNode> nodes, RootMode mode);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(int id) const { return nodes_.at(id); }
  const std::vector<int>& children(int id) const { return children_.at(id); }
  RootMode mode() const { return mode_; }
  int root() const { return root_; }
  int leaf_count() const { return leaf_count_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  /// Node carrying the given sample label.
  int leaf_node(int label) const;

  /// time(child) - time(parent); 0 for the root.
  double edge_length(int id) const;
  double total_length() const;
  double root_depth() const { return -nodes_[root_].time; }

  /// Number of leaves below (or at) each node.
  const std::vector<int>& carrier_counts() const { return carriers_; }

  /// Total edge length carried by exactly k leaves, k = 0..n.
  std::vector<double> length_by_carriers() const;

  /// Depth of the MRCA of the given sample labels, found by walking up.
  double tmrca(std::span<const int> labels) const;
  int mrca(std::span<const int> labels) const;

 private:
  void validate() const;

  std::vector<TreeNode> nodes_;
  std::vector<std::vector<int>> children_;
  std::vector<int> carriers_;
  RootMode mode_ = RootMode::SampleMrca;
  int root_ = -1;
  int leaf_count_ = 0;
};

/// Attaches the bottom of each non-spine branch k at depth zeta_k on the
/// first longer branch toward the spine, then cuts the spine at the last
/// branching point (SampleMrca) or at max_{0..n+1} zeta (PopulationMrca).
GenealogyTree build_tree(const LeafConfig& config, const ZetaVector& zetas, RootMode mode);

struct MutationAtom {
  int edge = 0;        ///< id of the child node of the edge
  double depth = 0.0;  ///< distance below the child node, in [0, edge length)
};

struct MutationOverlay {
  std::vector<MutationAtom> atoms;
};

/// Poisson(mu * length) mutations per edge at uniform depths, edges in id order.
MutationOverlay drop_mutations(const GenealogyTree& tree, const ModelParams& p, Rng& rng);

/// Number of sample leaves carrying each mutation.
std::vector<int> leafset_counts(const GenealogyTree& tree, const MutationOverlay& overlay);

/// xi_k for k = 0..n from an overlay.
std::vector<std::int64_t> overlay_sfs(const GenealogyTree& tree, const MutationOverlay& overlay);

}  // namespace cbsfs
