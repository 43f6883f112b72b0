#pragma once

#include <optional>
#include <vector>

#include "matnet/graph.hpp"
#include "matnet/matrix.hpp"

namespace matnet {

/// Partition of the node set {0, ..., n-1} into disjoint nonempty cells.
/// Canonical form: members sorted within each cell, cells ordered by their
/// smallest member.
class Partition {
 public:
  Partition(std::vector<std::vector<int>> cells, int node_count);

  static Partition singletons(int node_count);
  static Partition single_cell(int node_count);

  int node_count() const { return n_; }
  int cell_count() const { return static_cast<int>(cells_.size()); }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  const std::vector<int>& cell(int index) const { return cells_[index]; }
  int cell_of(int node) const { return cell_index_[node]; }
  bool has_nontrivial_cell() const;
  bool is_all_singletons() const { return cell_count() == n_; }

  /// True when every cell of *this lies inside one cell of `coarser`.
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  int n_;
  std::vector<std::vector<int>> cells_;
  std::vector<int> cell_index_;
};

/// Block 0/I lift of a partition: dn x (k d), block (i, j) = I_d iff node i
/// lies in cell j.
struct CharacteristicMatrix {
  MatQ p;
  Partition partition;
  int d;
};

CharacteristicMatrix characteristic_matrix(const Partition& pi, int d);

struct EpViolation {
  int cell_a = 0;          // cell containing the mismatched node pair
  int cell_b = 0;          // target cell of the sums
  int node_r = 0;
  int node_s = 0;
  EdgeSign sign_class = EdgeSign::positive;
  MatQ sum_r;
  MatQ sum_s;
};

struct EpWitness {
  bool equitable = false;
  std::optional<EpViolation> violation;
};

/// Sum of signed adjacency blocks from `node` into `cell`, restricted to one
/// sign class.
MatQ cell_sum(const Graph& g, int node, const std::vector<int>& cell,
              EdgeSign sign_class);

/// Checks the equitable-partition condition: within every cell, all nodes
/// must have identical positive-class and negative-class weight sums toward
/// every cell. Exact comparison; the overload with `tolerance` compares in
/// floating point with entrywise |delta| <= tolerance * (1 + max |entry|).
EpWitness is_equitable(const Graph& g, const Partition& pi);
EpWitness is_equitable(const Graph& g, const Partition& pi, double tolerance);

/// Default starting partition for EP discovery: every leader isolated in a
/// singleton cell, all followers together.
Partition leader_init(const Graph& g);

/// Coarsest equitable partition refining `init`, by iterated signature
/// splitting. Deterministic: signatures are canonical serializations of the
/// per-cell sum matrices.
Partition coarsest_ep(const Graph& g, const Partition& init);

/// Quotient operator of the Laplacian over an equitable partition. Built so
/// that laplacian(g) * P_pi = P_pi * quotient_laplacian(g, pi) holds exactly:
/// off-diagonal block (i, j) is minus the signed sum from a representative of
/// cell i into cell j, and the diagonal block is the representative's degree
/// minus its within-cell signed sum. Throws when pi is not equitable.
MatQ quotient_laplacian(const Graph& g, const Partition& pi);

/// Finest common coarsening of two partitions (connected components of the
/// "same cell somewhere" relation).
Partition join(const Partition& a, const Partition& b);

}  // namespace matnet
