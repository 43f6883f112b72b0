#pragma once

#include <optional>
#include <span>
#include <vector>

#include "matnet/matrix.hpp"

namespace matnet {

enum class EdgeSign { positive, negative };

/// Definiteness of a symmetric weight magnitude. Indefinite magnitudes are
/// legal but flagged in reports.
enum class Definiteness { positive_definite, positive_semidefinite, indefinite };

Definiteness classify_definiteness(const MatQ& symmetric);

/// Undirected edge with a sign tag and a symmetric d x d magnitude. The
/// signed adjacency block is sign * weight; the magnitude itself is what
/// enters node degrees.
struct WeightedEdge {
  int i = 0;  // 0-based endpoints, i < j after canonicalization
  int j = 0;
  EdgeSign sign = EdgeSign::positive;
  MatQ weight;
};

/// Matrix-weighted signed graph with a designated leader set.
///
/// Node ids are 0-based here; external formats use 1-based ids.
class Graph {
 public:
  /// Validates: d >= 1, endpoints distinct and in range, no duplicate pairs,
  /// weights symmetric nonzero d x d, leaders distinct with 1 <= m < n.
  Graph(int n, int d, std::vector<WeightedEdge> edges, std::vector<int> leaders);

  int node_count() const { return n_; }
  int state_dim() const { return d_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }
  const std::vector<int>& leaders() const { return leaders_; }
  bool is_leader(int node) const;

  const WeightedEdge* find_edge(int i, int j) const;

  /// Signed adjacency block: sign * weight for an edge, zero otherwise.
  MatQ adjacency_block(int i, int j) const;
  /// Magnitude |A_ij| (the stored weight), zero when no edge.
  MatQ weight_magnitude(int i, int j) const;
  /// Degree d_i = sum of neighbor magnitudes.
  MatQ degree(int i) const;
  /// Block Laplacian L = D - A, a dn x dn symmetric matrix.
  MatQ laplacian() const;

  /// Edges whose magnitude is indefinite (flagged, not rejected).
  std::vector<int> indefinite_edge_indices() const;

 private:
  void check_node(int i) const;

  int n_;
  int d_;
  std::vector<WeightedEdge> edges_;  // canonical: i < j, sorted by (i, j)
  std::vector<int> leaders_;         // sorted ascending
};

/// Union graph: shared node set, union edge set, summed signed adjacency.
/// A pair whose blocks cancel to zero yields no edge; surviving blocks are
/// re-classified into a sign tag and magnitude.
Graph union_graph(std::span<const Graph> graphs);

}  // namespace matnet
