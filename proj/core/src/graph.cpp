#include "matnet/graph.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace matnet {

namespace {

// Determinant of a small symmetric rational matrix via cofactor-free
// fraction elimination; d stays tiny (state dimensions), so O(d^3) is fine.
Rational determinant(MatQ m) {
  const int n = m.rows();
  Rational det{1};
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!m(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) return Rational{0};
    if (pivot != col) {
      for (int c = col; c < n; ++c) std::swap(m(col, c), m(pivot, c));
      det = -det;
    }
    det *= m(col, col);
    const Rational inv = Rational{1} / m(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (m(r, col).is_zero()) continue;
      const Rational f = m(r, col) * inv;
      for (int c = col; c < n; ++c) m(r, c) -= f * m(col, c);
    }
  }
  return det;
}

MatQ principal_submatrix(const MatQ& m, const std::vector<int>& idx) {
  MatQ out(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
  for (size_t r = 0; r < idx.size(); ++r)
    for (size_t c = 0; c < idx.size(); ++c) out(r, c) = m(idx[r], idx[c]);
  return out;
}

}  // namespace

Definiteness classify_definiteness(const MatQ& m) {
  if (!m.is_symmetric())
    throw std::invalid_argument("classify_definiteness: not symmetric");
  const int n = m.rows();

  // Sylvester: positive definite iff all leading principal minors > 0.
  bool pd = true;
  for (int k = 1; k <= n && pd; ++k) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (determinant(principal_submatrix(m, idx)).sign() <= 0) pd = false;
  }
  if (pd) return Definiteness::positive_definite;

  // PSD needs every principal minor >= 0; n is the state dimension, so the
  // 2^n enumeration is tiny.
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    if (determinant(principal_submatrix(m, idx)).sign() < 0)
      return Definiteness::indefinite;
  }
  return Definiteness::positive_semidefinite;
}

Graph::Graph(int n, int d, std::vector<WeightedEdge> edges,
             std::vector<int> leaders)
    : n_(n), d_(d), edges_(std::move(edges)), leaders_(std::move(leaders)) {
  if (n_ < 2) throw std::invalid_argument("Graph: need at least two nodes");
  if (d_ < 1) throw std::invalid_argument("Graph: state dimension < 1");

  for (WeightedEdge& e : edges_) {
    if (e.i == e.j)
      throw std::invalid_argument("Graph: self-loop at node " +
                                  std::to_string(e.i + 1));
    check_node(e.i);
    check_node(e.j);
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.weight.rows() != d_ || e.weight.cols() != d_)
      throw std::invalid_argument("Graph: weight must be d x d");
    if (!e.weight.is_symmetric())
      throw std::invalid_argument("Graph: weight not symmetric on edge " +
                                  std::to_string(e.i + 1) + "-" +
                                  std::to_string(e.j + 1));
    if (e.weight.is_zero())
      throw std::invalid_argument("Graph: zero weight on edge " +
                                  std::to_string(e.i + 1) + "-" +
                                  std::to_string(e.j + 1));
  }
  std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });
  for (size_t k = 1; k < edges_.size(); ++k)
    if (edges_[k - 1].i == edges_[k].i && edges_[k - 1].j == edges_[k].j)
      throw std::invalid_argument("Graph: duplicate edge " +
                                  std::to_string(edges_[k].i + 1) + "-" +
                                  std::to_string(edges_[k].j + 1));

  if (leaders_.empty()) throw std::invalid_argument("Graph: no leaders");
  std::sort(leaders_.begin(), leaders_.end());
  if (std::adjacent_find(leaders_.begin(), leaders_.end()) != leaders_.end())
    throw std::invalid_argument("Graph: duplicate leader id");
  for (int l : leaders_) check_node(l);
  if (static_cast<int>(leaders_.size()) >= n_)
    throw std::invalid_argument("Graph: leaders must be a strict subset");
}

void Graph::check_node(int i) const {
  if (i < 0 || i >= n_)
    throw std::invalid_argument("Graph: node id out of range: " +
                                std::to_string(i + 1));
}

bool Graph::is_leader(int node) const {
  return std::binary_search(leaders_.begin(), leaders_.end(), node);
}

const WeightedEdge* Graph::find_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(
      edges_.begin(), edges_.end(), std::pair(i, j),
      [](const WeightedEdge& e, const std::pair<int, int>& key) {
        return std::pair(e.i, e.j) < key;
      });
  if (it != edges_.end() && it->i == i && it->j == j) return &*it;
  return nullptr;
}

MatQ Graph::adjacency_block(int i, int j) const {
  check_node(i);
  check_node(j);
  const WeightedEdge* e = (i == j) ? nullptr : find_edge(i, j);
  if (!e) return MatQ::zero(d_, d_);
  return e->sign == EdgeSign::positive ? e->weight : -e->weight;
}

MatQ Graph::weight_magnitude(int i, int j) const {
  check_node(i);
  check_node(j);
  const WeightedEdge* e = (i == j) ? nullptr : find_edge(i, j);
  return e ? e->weight : MatQ::zero(d_, d_);
}

MatQ Graph::degree(int i) const {
  check_node(i);
  MatQ sum = MatQ::zero(d_, d_);
  for (const WeightedEdge& e : edges_) {
    if (e.i == i || e.j == i) sum += e.weight;
  }
  return sum;
}

MatQ Graph::laplacian() const {
  MatQ l = MatQ::zero(d_ * n_, d_ * n_);
  for (int i = 0; i < n_; ++i) l.set_block(d_ * i, d_ * i, degree(i));
  for (const WeightedEdge& e : edges_) {
    const MatQ off = e.sign == EdgeSign::positive ? -e.weight : e.weight;
    l.set_block(d_ * e.i, d_ * e.j, off);
    l.set_block(d_ * e.j, d_ * e.i, off);
  }
  return l;
}

std::vector<int> Graph::indefinite_edge_indices() const {
  std::vector<int> out;
  for (size_t k = 0; k < edges_.size(); ++k)
    if (classify_definiteness(edges_[k].weight) == Definiteness::indefinite)
      out.push_back(static_cast<int>(k));
  return out;
}

Graph union_graph(std::span<const Graph> graphs) {
  if (graphs.empty())
    throw std::invalid_argument("union_graph: empty graph list");
  const Graph& first = graphs.front();
  for (const Graph& g : graphs) {
    if (g.node_count() != first.node_count() ||
        g.state_dim() != first.state_dim() || g.leaders() != first.leaders())
      throw std::invalid_argument("union_graph: incompatible members");
  }

  std::map<std::pair<int, int>, MatQ> sums;
  for (const Graph& g : graphs)
    for (const WeightedEdge& e : g.edges()) {
      MatQ signed_block =
          e.sign == EdgeSign::positive ? e.weight : -e.weight;
      auto [it, inserted] = sums.try_emplace(std::pair(e.i, e.j), signed_block);
      if (!inserted) it->second += signed_block;
    }

  std::vector<WeightedEdge> edges;
  for (auto& [pair, block] : sums) {
    if (block.is_zero()) continue;  // cancelled out: no edge in the union
    // Re-derive a sign tag and magnitude. Negative-semidefinite sums flip
    // the tag; genuinely indefinite sums fall back to the sign of the first
    // nonzero entry so the split stays deterministic.
    auto first_nonzero_sign = [](const MatQ& m) {
      for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
          if (!m(r, c).is_zero()) return m(r, c).sign();
      return 0;
    };
    EdgeSign sign = EdgeSign::positive;
    MatQ magnitude = block;
    if (classify_definiteness(-block) != Definiteness::indefinite ||
        (classify_definiteness(block) == Definiteness::indefinite &&
         first_nonzero_sign(block) < 0)) {
      sign = EdgeSign::negative;
      magnitude = -block;
    }
    edges.push_back({pair.first, pair.second, sign, std::move(magnitude)});
  }
  return Graph(first.node_count(), first.state_dim(), std::move(edges),
               first.leaders());
}

}  // namespace matnet
