#pragma once

#include <span>
#include <vector>

#include "matnet/graph.hpp"
#include "matnet/matrix.hpp"
#include "matnet/partition.hpp"

namespace matnet {

/// Shared node dynamics: state update A (d x d), coupling gain chain
/// B (d x p), K (p x d), and external-input matrix C (d x q).
struct Dynamics {
  MatQ a, b, k, c;
};

/// Per-node (a_i, b_i) with shared k and c. One pair per node.
struct HeterogeneousDynamics {
  std::vector<MatQ> a;
  std::vector<MatQ> b;
  MatQ k, c;
};

enum class SystemVariant {
  fixed,
  switching_member,
  heterogeneous,
  union_graph,
  dual,
};

/// The stacked dn-dimensional state equation x' = L~ x + M~ y.
struct AugmentedSystem {
  MatQ l_tilde;             // dn x dn
  MatQ m_tilde;             // dn x (m q): C blocks at leader rows
  SystemVariant variant = SystemVariant::fixed;
  int n = 0;
  int d = 0;
  std::vector<int> leaders;

  int ambient_dim() const { return l_tilde.rows(); }
};

/// Members share m_tilde, dimensions, and dynamics; one source graph per
/// member.
struct SwitchingFamily {
  std::vector<AugmentedSystem> members;
  std::vector<Graph> source_graphs;
  Dynamics dynamics;
};

/// Whether the union system multiplies the block-diagonal A term by the
/// member count t (as its state equation is written) or leaves it at 1
/// (sensitivity check).
enum class UnionAFactor { t, one };

void validate_dynamics(const Dynamics& dyn, int d);
void validate_dynamics(const HeterogeneousDynamics& dyn, int n, int d);

/// Leader input selector times blockdiag(C): dn x (m q).
MatQ leader_input_matrix(int n, int d, std::span<const int> leaders,
                         const MatQ& c);

/// L~ = blockdiag(A) - blockdiag(BK) L,  M~ = M blockdiag(C).
AugmentedSystem assemble_fixed(const Graph& g, const Dynamics& dyn);
/// Same, but with an explicitly supplied Laplacian (dn x dn), bypassing the
/// graph's sign convention.
AugmentedSystem assemble_fixed(const Graph& g, const Dynamics& dyn,
                               const MatQ& laplacian_override);

/// L~' = blockdiag(A_1..A_n) - [B_i K L_ij] with per-node A_i, B_i.
AugmentedSystem assemble_heterogeneous(const Graph& g,
                                       const HeterogeneousDynamics& dyn);

/// Union system over t member graphs: L~* = t blockdiag(A) - blockdiag(BK) L*
/// where L* is the union-graph Laplacian. The factor t makes L~* equal the
/// sum of the member L~'s.
AugmentedSystem assemble_union(std::span<const Graph> graphs,
                               const Dynamics& dyn,
                               UnionAFactor factor = UnionAFactor::t);

/// Transposes l_tilde, keeps m_tilde: the controllability of the result is
/// the observability of the input system under leader outputs.
AugmentedSystem dualize(const AugmentedSystem& sys);

/// P~_pi = P_pi blockdiag(C, k copies): dn x (k q).
MatQ lifted_characteristic(const CharacteristicMatrix& pi, const MatQ& c);

SwitchingFamily make_switching_family(std::span<const Graph> graphs,
                                      const Dynamics& dyn);

}  // namespace matnet
