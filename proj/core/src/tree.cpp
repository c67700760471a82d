#include "cbsfs/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cbsfs {

GenealogyTree::GenealogyTree(std::vector<TreeNode> nodes, RootMode mode) : nodes_(std::move(nodes)), mode_(mode) {
  const int m = static_cast<int>(nodes_.size());
  if (m == 0) throw std::invalid_argument("GenealogyTree: empty node list");
  children_.assign(m, {});
  for (int i = 0; i < m; ++i) {
    const auto& nd = nodes_[i];
    if (nd.id != i) throw std::invalid_argument("GenealogyTree: node ids must equal their index");
    if (nd.parent == -1) {
      if (root_ != -1) throw std::invalid_argument("GenealogyTree: more than one root");
      root_ = i;
    } else if (nd.parent < 0 || nd.parent >= m || nd.parent == i) {
      throw std::invalid_argument("GenealogyTree: bad parent id");
    } else {
      children_[nd.parent].push_back(i);
    }
    if (nd.leaf_label) ++leaf_count_;
  }
  if (root_ == -1) throw std::invalid_argument("GenealogyTree: no root");
  validate();

  // Children have strictly larger times than parents, so a sort by time
  // (latest first) is a leaves-to-root order.
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return nodes_[a].time > nodes_[b].time; });
  carriers_.assign(m, 0);
  for (int id : order) {
    if (nodes_[id].leaf_label) carriers_[id] += 1;
    if (nodes_[id].parent >= 0) carriers_[nodes_[id].parent] += carriers_[id];
  }
}

void GenealogyTree::validate() const {
  std::vector<char> seen(nodes_.size(), 0);
  for (const auto& nd : nodes_) {
    if (!std::isfinite(nd.time) || nd.time > 0.0) throw std::invalid_argument("GenealogyTree: node times must be <= 0");
    if (nd.leaf_label) {
      const int lab = *nd.leaf_label;
      if (lab < 0 || lab >= static_cast<int>(nodes_.size()) || seen[lab]) {
        throw std::invalid_argument("GenealogyTree: leaf labels must be distinct in 0..n-1");
      }
      seen[lab] = 1;
      if (nd.time != 0.0) throw std::invalid_argument("GenealogyTree: leaves must sit at time 0");
      if (!children_[nd.id].empty()) throw std::invalid_argument("GenealogyTree: labelled node has children");
    } else if (children_[nd.id].empty()) {
      throw std::invalid_argument("GenealogyTree: unlabelled leaf");
    }
    if (nd.parent >= 0 && !(nodes_[nd.parent].time < nd.time)) {
      throw std::invalid_argument("GenealogyTree: edge of non-positive length at node " + std::to_string(nd.id));
    }
  }
  for (int lab = 0; lab < leaf_count_; ++lab) {
    if (!seen[lab]) throw std::invalid_argument("GenealogyTree: leaf labels must be 0..n-1");
  }
}

int GenealogyTree::leaf_node(int label) const {
  for (const auto& nd : nodes_) {
    if (nd.leaf_label == label) return nd.id;
  }
  throw std::out_of_range("GenealogyTree: no leaf with label " + std::to_string(label));
}

double GenealogyTree::edge_length(int id) const {
  const auto& nd = nodes_.at(id);
  return nd.parent < 0 ? 0.0 : nd.time - nodes_[nd.parent].time;
}

double GenealogyTree::total_length() const {
  double sum = 0.0;
  for (const auto& nd : nodes_) sum += edge_length(nd.id);
  return sum;
}

std::vector<double> GenealogyTree::length_by_carriers() const {
  std::vector<double> out(leaf_count_ + 1, 0.0);
  for (const auto& nd : nodes_) {
    if (nd.parent >= 0) out[carriers_[nd.id]] += edge_length(nd.id);
  }
  return out;
}

int GenealogyTree::mrca(std::span<const int> labels) const {
  if (labels.empty()) throw std::invalid_argument("GenealogyTree::mrca: empty leaf set");
  std::vector<int> path;
  std::vector<int> where(nodes_.size(), -1);
  for (int v = leaf_node(labels[0]); v >= 0; v = nodes_[v].parent) {
    where[v] = static_cast<int>(path.size());
    path.push_back(v);
  }
  int deepest = 0;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    int v = leaf_node(labels[i]);
    while (where[v] < 0) v = nodes_[v].parent;
    deepest = std::max(deepest, where[v]);
  }
  return path[deepest];
}

double GenealogyTree::tmrca(std::span<const int> labels) const { return -nodes_[mrca(labels)].time; }

GenealogyTree build_tree(const LeafConfig& c, const ZetaVector& z, RootMode mode) {
  c.validate();
  z.validate(c);
  const int n = c.n;
  const int spine = c.spine_index;

  // Line t collects (depth, k) for every branch k whose bottom lands on it.
  std::vector<std::vector<std::pair<double, int>>> landing(n + 2);
  for (int k = 1; k <= n; ++k) {
    if (k == spine) continue;
    const double zk = z.zetas[k];
    if (!(zk > 0.0)) throw std::invalid_argument("build_tree: non-spine branch of zero length");
    int t = k;
    const int step = c.positions[k] < 0.0 ? 1 : -1;
    do {
      t += step;
    } while (t != spine && !(z.zetas[t] > zk));
    landing[t].emplace_back(zk, k);
  }

  std::vector<TreeNode> nodes;
  nodes.reserve(2 * n + 1);
  for (int k = 1; k <= n; ++k) nodes.push_back({k - 1, 0.0, -1, c.labels[k]});

  // Branching nodes, one per distinct landing depth on each line.
  std::vector<std::vector<int>> line_nodes(n + 2);
  std::vector<int> bottom(n + 2, -1);
  for (int t = 1; t <= n; ++t) {
    auto& l = landing[t];
    std::sort(l.begin(), l.end());
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (i == 0 || l[i].first != l[i - 1].first) {
        const int id = static_cast<int>(nodes.size());
        nodes.push_back({id, -l[i].first, -1, std::nullopt});
        line_nodes[t].push_back(id);
      }
      bottom[l[i].second] = line_nodes[t].back();
    }
  }

  for (int t = 1; t <= n; ++t) {
    int prev = t - 1;
    for (int id : line_nodes[t]) {
      nodes[prev].parent = id;
      prev = id;
    }
    if (t != spine) {
      nodes[prev].parent = bottom[t];
      continue;
    }
    if (mode == RootMode::PopulationMrca) {
      const double depth = population_tmrca(z);
      if (depth > -nodes[prev].time) {
        const int id = static_cast<int>(nodes.size());
        nodes.push_back({id, -depth, -1, std::nullopt});
        nodes[prev].parent = id;
      }
    }
  }
  return GenealogyTree(std::move(nodes), mode);
}

MutationOverlay drop_mutations(const GenealogyTree& tree, const ModelParams& p, Rng& rng) {
  MutationOverlay out;
  if (p.mu == 0.0) return out;
  for (const auto& nd : tree.nodes()) {
    if (nd.parent < 0) continue;
    const double len = tree.edge_length(nd.id);
    const auto count = poisson(rng, p.mu * len);
    for (std::int64_t i = 0; i < count; ++i) {
      double d = len * uniform01(rng);
      if (d >= len) d = std::nextafter(len, 0.0);
      out.atoms.push_back({nd.id, d});
    }
  }
  return out;
}

std::vector<int> leafset_counts(const GenealogyTree& tree, const MutationOverlay& overlay) {
  std::vector<int> out;
  out.reserve(overlay.atoms.size());
  for (const auto& a : overlay.atoms) out.push_back(tree.carrier_counts().at(a.edge));
  return out;
}

std::vector<std::int64_t> overlay_sfs(const GenealogyTree& tree, const MutationOverlay& overlay) {
  std::vector<std::int64_t> xi(tree.leaf_count() + 1, 0);
  for (int c : leafset_counts(tree, overlay)) ++xi[c];
  return xi;
}

}  // namespace cbsfs
