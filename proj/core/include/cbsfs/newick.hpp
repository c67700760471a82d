#pragma once

#include <string>
#include <string_view>

#include "cbsfs/tree.hpp"

namespace cbsfs {

/// Newick with branch lengths and leaf names "X<label>". Children are
/// ordered by their smallest leaf label. A single-leaf tree is written as
/// "(X0:0);".
std::string to_newick(const GenealogyTree& tree);

/// Parses the subset of Newick written by to_newick. Leaves are placed at
/// time 0; a root with one child over a zero-length edge is dropped.
/// Throws std::invalid_argument on malformed input.
GenealogyTree parse_newick(std::string_view text, RootMode mode = RootMode::SampleMrca);

/// Same clades with node times equal within `tol`.
bool isomorphic(const GenealogyTree& a, const GenealogyTree& b, double tol = 1e-9);

}  // namespace cbsfs
