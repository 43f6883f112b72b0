#include "matnet/system.hpp"

#include <stdexcept>
#include <string>

namespace matnet {

void validate_dynamics(const Dynamics& dyn, int d) {
  if (dyn.a.rows() != d || dyn.a.cols() != d)
    throw std::invalid_argument("Dynamics: A must be d x d");
  if (dyn.b.rows() != d)
    throw std::invalid_argument("Dynamics: B must have d rows");
  if (dyn.k.cols() != d)
    throw std::invalid_argument("Dynamics: K must have d columns");
  if (dyn.b.cols() != dyn.k.rows())
    throw std::invalid_argument("Dynamics: B K product shape mismatch");
  if (dyn.c.rows() != d)
    throw std::invalid_argument("Dynamics: C must have d rows");
  if (dyn.c.cols() < 1)
    throw std::invalid_argument("Dynamics: C must have at least one column");
}

void validate_dynamics(const HeterogeneousDynamics& dyn, int n, int d) {
  if (static_cast<int>(dyn.a.size()) != n ||
      static_cast<int>(dyn.b.size()) != n)
    throw std::invalid_argument(
        "HeterogeneousDynamics: need one (A_i, B_i) per node");
  const int p = dyn.k.rows();
  for (int i = 0; i < n; ++i) {
    if (dyn.a[i].rows() != d || dyn.a[i].cols() != d)
      throw std::invalid_argument("HeterogeneousDynamics: A_" +
                                  std::to_string(i + 1) + " must be d x d");
    if (dyn.b[i].rows() != d || dyn.b[i].cols() != p)
      throw std::invalid_argument("HeterogeneousDynamics: B_" +
                                  std::to_string(i + 1) +
                                  " shape inconsistent with K");
  }
  if (dyn.k.cols() != d)
    throw std::invalid_argument("HeterogeneousDynamics: K must have d columns");
  if (dyn.c.rows() != d)
    throw std::invalid_argument("HeterogeneousDynamics: C must have d rows");
}

MatQ leader_input_matrix(int n, int d, std::span<const int> leaders,
                         const MatQ& c) {
  const int q = c.cols();
  MatQ m = MatQ::zero(d * n, static_cast<int>(leaders.size()) * q);
  for (size_t l = 0; l < leaders.size(); ++l)
    m.set_block(d * leaders[l], static_cast<int>(l) * q, c);
  return m;
}

namespace {

AugmentedSystem assemble_with_laplacian(const Graph& g, const Dynamics& dyn,
                                        const MatQ& laplacian,
                                        SystemVariant variant) {
  const int n = g.node_count(), d = g.state_dim();
  validate_dynamics(dyn, d);
  if (laplacian.rows() != d * n || laplacian.cols() != d * n)
    throw std::invalid_argument("assemble: Laplacian must be dn x dn");
  const MatQ bk = dyn.b * dyn.k;
  AugmentedSystem sys;
  sys.l_tilde =
      MatQ::block_diag(dyn.a, n) - MatQ::block_diag(bk, n) * laplacian;
  sys.m_tilde = leader_input_matrix(n, d, g.leaders(), dyn.c);
  sys.variant = variant;
  sys.n = n;
  sys.d = d;
  sys.leaders = g.leaders();
  return sys;
}

}  // namespace

AugmentedSystem assemble_fixed(const Graph& g, const Dynamics& dyn) {
  return assemble_with_laplacian(g, dyn, g.laplacian(), SystemVariant::fixed);
}

AugmentedSystem assemble_fixed(const Graph& g, const Dynamics& dyn,
                               const MatQ& laplacian_override) {
  return assemble_with_laplacian(g, dyn, laplacian_override,
                                 SystemVariant::fixed);
}

AugmentedSystem assemble_heterogeneous(const Graph& g,
                                       const HeterogeneousDynamics& dyn) {
  const int n = g.node_count(), d = g.state_dim();
  validate_dynamics(dyn, n, d);
  const MatQ laplacian = g.laplacian();
  MatQ coupling = MatQ::zero(d * n, d * n);
  for (int i = 0; i < n; ++i) {
    const MatQ bik = dyn.b[i] * dyn.k;
    for (int j = 0; j < n; ++j)
      coupling.set_block(d * i, d * j,
                         bik * laplacian.block(d * i, d * j, d, d));
  }
  std::vector<MatQ> diag(dyn.a.begin(), dyn.a.end());
  AugmentedSystem sys;
  sys.l_tilde = MatQ::block_diag(std::span<const MatQ>(diag)) - coupling;
  sys.m_tilde = leader_input_matrix(n, d, g.leaders(), dyn.c);
  sys.variant = SystemVariant::heterogeneous;
  sys.n = n;
  sys.d = d;
  sys.leaders = g.leaders();
  return sys;
}

AugmentedSystem assemble_union(std::span<const Graph> graphs,
                               const Dynamics& dyn, UnionAFactor factor) {
  if (graphs.empty()) throw std::invalid_argument("assemble_union: no graphs");
  const Graph merged = union_graph(graphs);
  const int n = merged.node_count(), d = merged.state_dim();
  validate_dynamics(dyn, d);
  const Rational t{factor == UnionAFactor::t
                       ? static_cast<long long>(graphs.size())
                       : 1LL};
  AugmentedSystem sys;
  sys.l_tilde = MatQ::block_diag(dyn.a, n) * t -
                MatQ::block_diag(dyn.b * dyn.k, n) * merged.laplacian();
  sys.m_tilde = leader_input_matrix(n, d, merged.leaders(), dyn.c);
  sys.variant = SystemVariant::union_graph;
  sys.n = n;
  sys.d = d;
  sys.leaders = merged.leaders();
  return sys;
}

AugmentedSystem dualize(const AugmentedSystem& sys) {
  AugmentedSystem dual = sys;
  dual.l_tilde = sys.l_tilde.transpose();
  dual.variant = SystemVariant::dual;
  return dual;
}

MatQ lifted_characteristic(const CharacteristicMatrix& pi, const MatQ& c) {
  if (c.rows() != pi.d)
    throw std::invalid_argument("lifted_characteristic: C must have d rows");
  return pi.p * MatQ::block_diag(c, pi.partition.cell_count());
}

SwitchingFamily make_switching_family(std::span<const Graph> graphs,
                                      const Dynamics& dyn) {
  if (graphs.empty())
    throw std::invalid_argument("make_switching_family: no graphs");
  SwitchingFamily family;
  family.dynamics = dyn;
  for (const Graph& g : graphs) {
    if (g.node_count() != graphs.front().node_count() ||
        g.state_dim() != graphs.front().state_dim() ||
        g.leaders() != graphs.front().leaders())
      throw std::invalid_argument("make_switching_family: incompatible graphs");
    AugmentedSystem member = assemble_fixed(g, dyn);
    member.variant = SystemVariant::switching_member;
    family.members.push_back(std::move(member));
    family.source_graphs.push_back(g);
  }
  return family;
}

}  // namespace matnet
