#include "cbsfs/newick.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

namespace cbsfs {

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

int min_label(const GenealogyTree& t, int id, std::vector<int>& memo) {
  if (memo[id] >= 0) return memo[id];
  const auto& nd = t.node(id);
  int m = nd.leaf_label ? *nd.leaf_label : t.leaf_count();
  for (int c : t.children(id)) m = std::min(m, min_label(t, c, memo));
  return memo[id] = m;
}

void emit(const GenealogyTree& t, int id, std::vector<int>& memo, std::string& out) {
  const auto& nd = t.node(id);
  if (nd.leaf_label) {
    out += 'X';
    out += std::to_string(*nd.leaf_label);
  } else {
    auto kids = t.children(id);
    std::sort(kids.begin(), kids.end(),
              [&](int a, int b) { return min_label(t, a, memo) < min_label(t, b, memo); });
    out += '(';
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) out += ',';
      emit(t, kids[i], memo, out);
    }
    out += ')';
  }
  if (nd.parent >= 0) {
    out += ':';
    append_double(out, t.edge_length(id));
  }
}

struct RawNode {
  int parent = -1;
  double length = 0.0;
  std::optional<int> label;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  std::vector<RawNode> run() {
    node(-1);
    skip_ws();
    expect(';');
    skip_ws();
    if (i_ != s_.size()) fail("trailing characters");
    return nodes_;
  }

 private:
  [[noreturn]] void fail(const char* what) const {
    throw std::invalid_argument(std::string("parse_newick: ") + what + " at offset " + std::to_string(i_));
  }
  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip_ws();
    return i_ < s_.size() && s_[i_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail("unexpected character");
    ++i_;
  }

  int node(int parent) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({parent, 0.0, std::nullopt});
    if (peek('(')) {
      ++i_;
      node(id);
      while (peek(',')) {
        ++i_;
        node(id);
      }
      expect(')');
    } else {
      skip_ws();
      if (i_ >= s_.size() || s_[i_] != 'X') fail("expected leaf name X<index>");
      ++i_;
      int label = 0;
      auto [p, ec] = std::from_chars(s_.data() + i_, s_.data() + s_.size(), label);
      if (ec != std::errc() || label < 0) fail("bad leaf index");
      i_ = static_cast<std::size_t>(p - s_.data());
      nodes_[id].label = label;
    }
    if (peek(':')) {
      ++i_;
      double len = 0.0;
      auto [p, ec] = std::from_chars(s_.data() + i_, s_.data() + s_.size(), len);
      if (ec != std::errc() || !(len >= 0.0) || !std::isfinite(len)) fail("bad branch length");
      i_ = static_cast<std::size_t>(p - s_.data());
      nodes_[id].length = len;
    }
    return id;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::vector<RawNode> nodes_;
};

}  // namespace

std::string to_newick(const GenealogyTree& tree) {
  std::string out;
  const int root = tree.root();
  if (tree.node(root).leaf_label) {
    out = "(X" + std::to_string(*tree.node(root).leaf_label) + ":0);";
    return out;
  }
  std::vector<int> memo(tree.size(), -1);
  emit(tree, root, memo, out);
  out += ';';
  return out;
}

GenealogyTree parse_newick(std::string_view text, RootMode mode) {
  auto raw = Parser(text).run();

  // Drop a unary root sitting on a zero-length edge.
  int root = 0;
  {
    int kids = 0, only = -1;
    for (int i = 1; i < static_cast<int>(raw.size()); ++i) {
      if (raw[i].parent == 0) {
        ++kids;
        only = i;
      }
    }
    if (kids == 1 && raw[only].length == 0.0) root = only;
  }

  // Depth below the root; parents precede children in parse order.
  const int m = static_cast<int>(raw.size());
  std::vector<double> depth(m, 0.0);
  double height = 0.0;
  for (int i = root + 1; i < m; ++i) {
    depth[i] = depth[raw[i].parent] + raw[i].length;
    if (raw[i].label) height = std::max(height, depth[i]);
  }

  std::vector<int> remap(m, -1);
  std::vector<TreeNode> nodes;
  for (int i = root; i < m; ++i) {
    if (i != root && remap[raw[i].parent] < 0) continue;
    const int id = static_cast<int>(nodes.size());
    remap[i] = id;
    const double time = raw[i].label ? 0.0 : depth[i] - height;
    nodes.push_back({id, time, i == root ? -1 : remap[raw[i].parent], raw[i].label});
  }
  return GenealogyTree(std::move(nodes), mode);
}

bool isomorphic(const GenealogyTree& a, const GenealogyTree& b, double tol) {
  auto clades = [](const GenealogyTree& t) {
    std::vector<std::vector<int>> sets(t.size());
    std::vector<int> order(t.size());
    for (int i = 0; i < t.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return t.node(x).time > t.node(y).time; });
    for (int id : order) {
      const auto& nd = t.node(id);
      if (nd.leaf_label) sets[id].push_back(*nd.leaf_label);
      std::sort(sets[id].begin(), sets[id].end());
      if (nd.parent >= 0) {
        auto& p = sets[nd.parent];
        p.insert(p.end(), sets[id].begin(), sets[id].end());
      }
    }
    std::vector<std::pair<std::vector<int>, double>> out;
    for (int i = 0; i < t.size(); ++i) out.emplace_back(std::move(sets[i]), t.node(i).time);
    std::sort(out.begin(), out.end());
    return out;
  };
  if (a.size() != b.size() || a.leaf_count() != b.leaf_count()) return false;
  const auto ca = clades(a);
  const auto cb = clades(b);
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i].first != cb[i].first || std::fabs(ca[i].second - cb[i].second) > tol) return false;
  }
  return true;
}

}  // namespace cbsfs
