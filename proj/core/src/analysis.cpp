#include "matnet/analysis.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace matnet {

namespace {

using linalg::FloatOptions;
using linalg::SubspaceBasis;

template <typename T>
bool is_identity(const Matrix<T>& m) {
  return m.is_square() && m == Matrix<T>::identity(m.rows());
}

/// Unique X with P_pi X = L P_pi, when it exists (P_pi has full column
/// rank). For graph Laplacians this equals the constructive quotient; for
/// override matrices it decides quotient compatibility.
template <typename T>
std::optional<Matrix<T>> quotient_of(const Matrix<T>& laplacian,
                                     const Matrix<T>& p_pi,
                                     const FloatOptions& fopts) {
  return linalg::solve_right(p_pi, laplacian * p_pi, fopts);
}

template <typename T>
ControllabilityVerdict<T> fixpoint_verdict(std::span<const Matrix<T>> maps,
                                           const Matrix<T>& m_tilde,
                                           const AnalysisOptions& opts) {
  ControllabilityVerdict<T> v;
  v.ambient_dim = m_tilde.rows();
  SubspaceBasis<T> seed = linalg::column_space(m_tilde, opts.float_opts);
  v.basis = linalg::invariant_image_fixpoint(maps, seed, opts.float_opts);
  v.subspace_dim = v.basis.dim();
  v.controllable = v.subspace_dim == v.ambient_dim;
  return v;
}

}  // namespace

double AnalysisOptions::effective_ep_tolerance() const {
  if (ep_tolerance >= 0.0) return ep_tolerance;
  return 1024.0 * std::numeric_limits<double>::epsilon();
}

template <typename T>
ControllabilityVerdict<T> ctrb(const AugmentedSystem& sys,
                               const AnalysisOptions& opts) {
  const Matrix<T> l = backend_cast<T>(sys.l_tilde);
  const Matrix<T> m = backend_cast<T>(sys.m_tilde);
  return fixpoint_verdict<T>(std::span(&l, 1), m, opts);
}

template <typename T>
ControllabilityVerdict<T> switching_ctrb(const SwitchingFamily& family,
                                         const AnalysisOptions& opts) {
  if (family.members.empty())
    throw std::invalid_argument("switching_ctrb: empty family");
  std::vector<Matrix<T>> maps;
  maps.reserve(family.members.size());
  for (const AugmentedSystem& sys : family.members)
    maps.push_back(backend_cast<T>(sys.l_tilde));
  const Matrix<T> m = backend_cast<T>(family.members.front().m_tilde);
  return fixpoint_verdict<T>(std::span<const Matrix<T>>(maps), m, opts);
}

namespace {

/// Shared solver for all three certificate variants. `a_of_cell` yields the
/// diagonal-equation left factor for a cell, `coupling_left(i)` the left
/// factor multiplying L_pi blocks in block-row i.
template <typename T>
QCertificate<T> solve_certificate(const Matrix<T>& l_pi, int k, int d,
                                  const Matrix<T>& c,
                                  CertificateVariant variant,
                                  auto a_of_cell, auto coupling_left,
                                  bool transpose_coupling,
                                  const FloatOptions& fopts) {
  QCertificate<T> cert;
  cert.variant = variant;
  const int n_diag =
      variant == CertificateVariant::heterogeneous ? k : 1;
  for (int i = 0; i < n_diag; ++i) {
    auto q1 = linalg::solve_right<T>(c, a_of_cell(i) * c, fopts);
    if (!q1) {
      cert.failing_equation = n_diag == 1 ? "q1" : "q1[" + std::to_string(i + 1) + "]";
      return cert;
    }
    cert.q1.push_back(std::move(*q1));
  }
  cert.qij.assign(k, {});
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const Matrix<T> l_block = l_pi.block(d * i, d * j, d, d);
      // fixed/heterogeneous: (B K) L_ij C = C Q_ij
      // dual:                L_ij (K^T B^T) C = C Q*_ij
      const Matrix<T> lhs = transpose_coupling
                                ? l_block * coupling_left(i) * c
                                : coupling_left(i) * l_block * c;
      auto qij = linalg::solve_right<T>(c, lhs, fopts);
      if (!qij) {
        cert.failing_equation =
            "q[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]";
        cert.q1.clear();
        cert.qij.clear();
        return cert;
      }
      cert.qij[i].push_back(std::move(*qij));
    }
  }
  cert.exists = true;
  return cert;
}

/// Assembles Q = blockdiag(q1) - [qij] and re-verifies the intertwining
/// identity l_tilde * P~ = P~ * Q.
template <typename T>
bool verify_certificate(const QCertificate<T>& cert, const Matrix<T>& l_tilde,
                        const Matrix<T>& p_lifted, int k,
                        const FloatOptions& fopts) {
  if (!cert.exists) return false;
  const int q = cert.q1.front().rows();
  Matrix<T> big_q = Matrix<T>::zero(k * q, k * q);
  for (int i = 0; i < k; ++i) {
    const Matrix<T>& diag =
        cert.q1.size() == 1 ? cert.q1.front() : cert.q1[i];
    for (int j = 0; j < k; ++j) {
      Matrix<T> blockv = -cert.qij[i][j];
      if (i == j) blockv += diag;
      big_q.set_block(q * i, q * j, blockv);
    }
  }
  const Matrix<T> lhs = l_tilde * p_lifted;
  const Matrix<T> rhs = p_lifted * big_q;
  if constexpr (std::is_same_v<T, Rational>) {
    return lhs == rhs;
  } else {
    double scale = 1.0, diff = 0.0;
    for (int r = 0; r < lhs.rows(); ++r)
      for (int c = 0; c < lhs.cols(); ++c) {
        scale = std::max(scale, std::abs(lhs(r, c)));
        diff = std::max(diff, std::abs(lhs(r, c) - rhs(r, c)));
      }
    const double tau = fopts.tolerance >= 0.0
                           ? fopts.tolerance
                           : 1024.0 * std::numeric_limits<double>::epsilon();
    return diff <= tau * scale;
  }
}

}  // namespace

bool cell_homogeneous(const HeterogeneousDynamics& dyn, const Partition& pi) {
  for (const auto& cell : pi.cells()) {
    for (size_t s = 1; s < cell.size(); ++s)
      if (!(dyn.a[cell[s]] == dyn.a[cell[0]]) ||
          !(dyn.b[cell[s]] == dyn.b[cell[0]]))
        return false;
  }
  return true;
}

Partition dynamics_refined_init(const Graph& g,
                                const HeterogeneousDynamics& dyn) {
  const Partition base = leader_init(g);
  std::vector<std::vector<int>> cells;
  for (const auto& cell : base.cells()) {
    std::vector<std::pair<std::string, std::vector<int>>> groups;
    for (int node : cell) {
      const std::string key =
          to_string(dyn.a[node]) + "#" + to_string(dyn.b[node]);
      auto it = std::find_if(groups.begin(), groups.end(),
                             [&](const auto& g2) { return g2.first == key; });
      if (it == groups.end())
        groups.push_back({key, {node}});
      else
        it->second.push_back(node);
    }
    for (auto& [unused, members] : groups) cells.push_back(std::move(members));
  }
  return Partition(std::move(cells), g.node_count());
}

template <typename T>
QCertificate<T> q_certificate(const MatQ& laplacian, const Partition& pi,
                              const Dynamics& dyn, CertificateVariant variant,
                              int d, const AnalysisOptions& opts) {
  if (variant == CertificateVariant::heterogeneous)
    throw std::invalid_argument(
        "q_certificate: heterogeneous variant takes HeterogeneousDynamics");
  validate_dynamics(dyn, d);
  const int k = pi.cell_count();
  const Matrix<T> p_pi = backend_cast<T>(characteristic_matrix(pi, d).p);
  const Matrix<T> l = backend_cast<T>(laplacian);
  const Matrix<T> l_for_quotient =
      variant == CertificateVariant::dual ? l.transpose() : l;
  auto l_pi = quotient_of<T>(l_for_quotient, p_pi, opts.float_opts);
  QCertificate<T> cert;
  cert.variant = variant;
  if (!l_pi) {
    cert.failing_equation = "quotient";
    return cert;
  }

  const Matrix<T> a = backend_cast<T>(dyn.a);
  const Matrix<T> c = backend_cast<T>(dyn.c);
  const Matrix<T> coupling =
      variant == CertificateVariant::dual
          ? backend_cast<T>((dyn.k.transpose() * dyn.b.transpose()))
          : backend_cast<T>(dyn.b * dyn.k);
  const Matrix<T> a_eff =
      variant == CertificateVariant::dual
          ? Matrix<T>(a.transpose())
          : a;
  cert = solve_certificate<T>(
      *l_pi, k, d, c, variant, [&](int) { return a_eff; },
      [&](int) { return coupling; },
      /*transpose_coupling=*/variant == CertificateVariant::dual,
      opts.float_opts);
  if (cert.exists) {
    const MatQ p_lifted_q =
        lifted_characteristic(characteristic_matrix(pi, d), dyn.c);
    const Matrix<T> p_lifted = backend_cast<T>(p_lifted_q);
    const Matrix<T> bk_n = Matrix<T>::block_diag(
        backend_cast<T>(dyn.b * dyn.k), pi.node_count());
    const Matrix<T> a_n = Matrix<T>::block_diag(a, pi.node_count());
    const Matrix<T> l_tilde =
        variant == CertificateVariant::dual
            ? Matrix<T>((a_n - bk_n * l).transpose())
            : Matrix<T>(a_n - bk_n * l);
    cert.verified = verify_certificate(cert, l_tilde, p_lifted, k,
                                       opts.float_opts);
    if constexpr (std::is_same_v<T, Rational>) {
      if (!cert.verified)
        throw std::logic_error("q_certificate: exact verification failed");
    }
  }
  return cert;
}

template <typename T>
QCertificate<T> q_certificate(const MatQ& laplacian, const Partition& pi,
                              const HeterogeneousDynamics& dyn, int d,
                              const AnalysisOptions& opts) {
  validate_dynamics(dyn, pi.node_count(), d);
  if (!cell_homogeneous(dyn, pi))
    throw std::invalid_argument(
        "q_certificate: dynamics differ within a cell");
  const int k = pi.cell_count();
  const Matrix<T> p_pi = backend_cast<T>(characteristic_matrix(pi, d).p);
  const Matrix<T> l = backend_cast<T>(laplacian);
  auto l_pi = quotient_of<T>(l, p_pi, opts.float_opts);
  QCertificate<T> cert;
  cert.variant = CertificateVariant::heterogeneous;
  if (!l_pi) {
    cert.failing_equation = "quotient";
    return cert;
  }
  const Matrix<T> c = backend_cast<T>(dyn.c);
  std::vector<Matrix<T>> cell_a(k), cell_bk(k);
  for (int i = 0; i < k; ++i) {
    const int rep = pi.cell(i)[0];
    cell_a[i] = backend_cast<T>(dyn.a[rep]);
    cell_bk[i] = backend_cast<T>(dyn.b[rep] * dyn.k);
  }
  cert = solve_certificate<T>(
      *l_pi, k, d, c, CertificateVariant::heterogeneous,
      [&](int i) { return cell_a[i]; }, [&](int i) { return cell_bk[i]; },
      /*transpose_coupling=*/false, opts.float_opts);
  if (cert.exists) {
    const MatQ p_lifted_q =
        lifted_characteristic(characteristic_matrix(pi, d), dyn.c);
    MatQ coupling = MatQ::zero(d * pi.node_count(), d * pi.node_count());
    std::vector<MatQ> diag;
    for (int i = 0; i < pi.node_count(); ++i) {
      const MatQ bik = dyn.b[i] * dyn.k;
      diag.push_back(dyn.a[i]);
      for (int j = 0; j < pi.node_count(); ++j)
        coupling.set_block(d * i, d * j,
                           bik * laplacian.block(d * i, d * j, d, d));
    }
    const MatQ l_tilde_q =
        MatQ::block_diag(std::span<const MatQ>(diag)) - coupling;
    cert.verified =
        verify_certificate(cert, backend_cast<T>(l_tilde_q),
                           backend_cast<T>(p_lifted_q), k, opts.float_opts);
    if constexpr (std::is_same_v<T, Rational>) {
      if (!cert.verified)
        throw std::logic_error("q_certificate: exact verification failed");
    }
  }
  return cert;
}

namespace {

bool is_equitable_for_backend(const Graph& g, const Partition& pi,
                              bool float_backend,
                              const AnalysisOptions& opts) {
  if (float_backend)
    return is_equitable(g, pi, opts.effective_ep_tolerance()).equitable;
  return is_equitable(g, pi).equitable;
}

template <typename T>
BoundReport bound_report_common(const Graph& g, const Partition& pi,
                                const MatQ& c,
                                const ControllabilityVerdict<T>& verdict,
                                bool cert_exists,
                                const std::string& cert_failure,
                                const AnalysisOptions& opts) {
  BoundReport report;
  report.partition_used = pi;
  report.ambient_dim = verdict.ambient_dim;
  report.achieved_dim = verdict.subspace_dim;
  if (!cert_exists) {
    report.applicable = false;
    report.reason = "certificate does not exist (" + cert_failure + ")";
    return report;
  }
  report.applicable = true;
  const MatQ p_lifted_q =
      lifted_characteristic(characteristic_matrix(pi, g.state_dim()), c);
  const Matrix<T> p_lifted = backend_cast<T>(p_lifted_q);
  report.bound = linalg::rank(p_lifted, opts.float_opts);
  report.containment_verified = linalg::contains(
      linalg::column_space(p_lifted, opts.float_opts), verdict.basis.vectors,
      opts.float_opts);
  report.tight = report.achieved_dim == report.bound;
  report.bound_violated = report.achieved_dim > report.bound;
  report.declares_uncontrollable = pi.has_nontrivial_cell();
  report.complete_control_input =
      c.is_square() && linalg::rank(c) == c.rows();
  return report;
}

}  // namespace

template <typename T>
BoundReport partition_bound(const Graph& g, const Dynamics& dyn,
                           std::optional<Partition> pi,
                           std::optional<MatQ> laplacian_override,
                           const AnalysisOptions& opts) {
  const bool float_backend = !std::is_same_v<T, Rational>;
  const Partition partition =
      pi ? *pi : coarsest_ep(g, leader_init(g));
  if (!is_equitable_for_backend(g, partition, float_backend, opts))
    throw std::invalid_argument("partition_bound: partition not equitable");
  const MatQ laplacian =
      laplacian_override ? *laplacian_override : g.laplacian();
  const QCertificate<T> cert = q_certificate<T>(
      laplacian, partition, dyn, CertificateVariant::fixed, g.state_dim(),
      opts);
  const ControllabilityVerdict<T> verdict =
      ctrb<T>(assemble_fixed(g, dyn, laplacian), opts);
  return bound_report_common<T>(g, partition, dyn.c, verdict, cert.exists,
                                cert.failing_equation, opts);
}

template <typename T>
BoundReport partition_bound(const Graph& g, const HeterogeneousDynamics& dyn,
                           std::optional<Partition> pi,
                           const AnalysisOptions& opts) {
  const bool float_backend = !std::is_same_v<T, Rational>;
  const Partition partition =
      pi ? *pi : coarsest_ep(g, dynamics_refined_init(g, dyn));
  if (!is_equitable_for_backend(g, partition, float_backend, opts))
    throw std::invalid_argument("partition_bound: partition not equitable");
  if (!cell_homogeneous(dyn, partition))
    throw std::invalid_argument(
        "partition_bound: dynamics differ within a cell");
  const QCertificate<T> cert =
      q_certificate<T>(g.laplacian(), partition, dyn, g.state_dim(), opts);
  const ControllabilityVerdict<T> verdict =
      ctrb<T>(assemble_heterogeneous(g, dyn), opts);
  return bound_report_common<T>(g, partition, dyn.c, verdict, cert.exists,
                                cert.failing_equation, opts);
}

template <typename T>
BoundReport switching_bound(const SwitchingFamily& family,
                           std::span<const Partition> partitions,
                           const AnalysisOptions& opts) {
  if (family.members.empty())
    throw std::invalid_argument("switching_bound: empty family");
  if (family.source_graphs.size() != family.members.size())
    throw std::invalid_argument("switching_bound: missing source graphs");
  const bool float_backend = !std::is_same_v<T, Rational>;

  std::vector<Partition> eps;
  if (!partitions.empty()) {
    if (partitions.size() != family.members.size())
      throw std::invalid_argument("switching_bound: one partition per member");
    eps.assign(partitions.begin(), partitions.end());
  } else {
    for (const Graph& g : family.source_graphs)
      eps.push_back(coarsest_ep(g, leader_init(g)));
  }

  const ControllabilityVerdict<T> verdict = switching_ctrb<T>(family, opts);
  BoundReport report;
  report.ambient_dim = verdict.ambient_dim;
  report.achieved_dim = verdict.subspace_dim;

  const Graph& g0 = family.source_graphs.front();
  for (size_t i = 0; i < eps.size(); ++i) {
    const Graph& gi = family.source_graphs[i];
    if (!is_equitable_for_backend(gi, eps[i], float_backend, opts))
      throw std::invalid_argument("switching_bound: member partition " +
                                  std::to_string(i + 1) + " not equitable");
    // Certificates must exist for every member l_tilde.
    const QCertificate<T> cert = q_certificate<T>(
        gi.laplacian(), eps[i], family.dynamics, CertificateVariant::fixed,
        gi.state_dim(), opts);
    if (!cert.exists) {
      report.applicable = false;
      report.reason = "member " + std::to_string(i + 1) +
                      " certificate does not exist (" +
                      cert.failing_equation + ")";
      report.partition_used = eps[i];
      return report;
    }
  }

  Partition joined = eps.front();
  for (size_t i = 1; i < eps.size(); ++i) joined = join(joined, eps[i]);
  report.applicable = true;
  report.partition_used = joined;
  report.bound = joined.cell_count() * g0.state_dim();
  report.tight = report.achieved_dim == report.bound;
  report.bound_violated = report.achieved_dim > report.bound;
  report.declares_uncontrollable = joined.has_nontrivial_cell();
  return report;
}

template <typename T>
UnionReport<T> union_analysis(std::span<const Graph> graphs,
                              const Dynamics& dyn, UnionAFactor factor,
                              const AnalysisOptions& opts) {
  if (graphs.empty())
    throw std::invalid_argument("union_analysis: no graphs");
  UnionReport<T> report;
  const SwitchingFamily family = make_switching_family(graphs, dyn);
  report.switched_verdict = switching_ctrb<T>(family, opts);
  report.union_verdict = ctrb<T>(assemble_union(graphs, dyn, factor), opts);

  bool all_certs = true, any_nontrivial = false;
  for (const Graph& g : graphs) {
    Partition ep = coarsest_ep(g, leader_init(g));
    const QCertificate<T> cert =
        q_certificate<T>(g.laplacian(), ep, dyn, CertificateVariant::fixed,
                         g.state_dim(), opts);
    report.member_cert_exists.push_back(cert.exists);
    report.member_has_nontrivial_cell.push_back(ep.has_nontrivial_cell());
    all_certs = all_certs && cert.exists;
    any_nontrivial = any_nontrivial || ep.has_nontrivial_cell();
    report.member_eps.push_back(std::move(ep));
  }

  const Graph merged = union_graph(graphs);
  report.union_ep = coarsest_ep(merged, leader_init(merged));
  const QCertificate<T> union_cert = q_certificate<T>(
      merged.laplacian(), report.union_ep, dyn, CertificateVariant::fixed,
      merged.state_dim(), opts);
  if (union_cert.exists)
    report.union_declared_uncontrollable =
        report.union_ep.has_nontrivial_cell();

  report.sufficiency_checked = report.union_verdict.controllable;
  report.sufficiency_holds =
      !report.sufficiency_checked || report.switched_verdict.controllable;

  report.nontrivial_cell_rule_applicable = all_certs && any_nontrivial;
  report.nontrivial_cell_rule_consistent =
      !report.nontrivial_cell_rule_applicable ||
      !report.union_verdict.controllable;

  report.indeterminate_by_rules = !report.union_verdict.controllable &&
                                     report.switched_verdict.controllable;
  return report;
}

template <typename T>
ObservabilityReport<T> observability(const Graph& g, const Dynamics& dyn,
                                     std::optional<Partition> pi,
                                     std::optional<MatQ> laplacian_override,
                                     const AnalysisOptions& opts) {
  const bool float_backend = !std::is_same_v<T, Rational>;
  ObservabilityReport<T> report;
  const MatQ laplacian =
      laplacian_override ? *laplacian_override : g.laplacian();
  const AugmentedSystem primal = assemble_fixed(g, dyn, laplacian);
  report.dual_verdict = ctrb<T>(dualize(primal), opts);
  report.observable = report.dual_verdict.controllable;

  report.ep = pi ? *pi : coarsest_ep(g, leader_init(g));
  if (!is_equitable_for_backend(g, report.ep, float_backend, opts))
    throw std::invalid_argument("observability: partition not equitable");
  report.q_star = q_certificate<T>(laplacian, report.ep, dyn,
                                   CertificateVariant::dual, g.state_dim(),
                                   opts);
  report.declares_unobservable_applicable =
      report.q_star.exists && report.ep.has_nontrivial_cell();
  report.declares_unobservable = report.declares_unobservable_applicable;

  report.first_order = dyn.a.is_zero() && is_identity(dyn.b) &&
                       is_identity(dyn.k) && is_identity(dyn.c);
  if (report.first_order && report.ep.has_nontrivial_cell())
    report.first_order_joint_verdict = true;  // uncontrollable + unobservable
  return report;
}

// ---------------------------------------------------------------------------
// Explicit instantiations
// ---------------------------------------------------------------------------

template ControllabilityVerdict<Rational> ctrb(const AugmentedSystem&,
                                               const AnalysisOptions&);
template ControllabilityVerdict<double> ctrb(const AugmentedSystem&,
                                             const AnalysisOptions&);
template ControllabilityVerdict<Rational> switching_ctrb(
    const SwitchingFamily&, const AnalysisOptions&);
template ControllabilityVerdict<double> switching_ctrb(const SwitchingFamily&,
                                                       const AnalysisOptions&);
template QCertificate<Rational> q_certificate(const MatQ&, const Partition&,
                                              const Dynamics&,
                                              CertificateVariant, int,
                                              const AnalysisOptions&);
template QCertificate<double> q_certificate(const MatQ&, const Partition&,
                                            const Dynamics&,
                                            CertificateVariant, int,
                                            const AnalysisOptions&);
template QCertificate<Rational> q_certificate(const MatQ&, const Partition&,
                                              const HeterogeneousDynamics&,
                                              int, const AnalysisOptions&);
template QCertificate<double> q_certificate(const MatQ&, const Partition&,
                                            const HeterogeneousDynamics&, int,
                                            const AnalysisOptions&);
template BoundReport partition_bound<Rational>(const Graph&, const Dynamics&,
                                              std::optional<Partition>,
                                              std::optional<MatQ>,
                                              const AnalysisOptions&);
template BoundReport partition_bound<double>(const Graph&, const Dynamics&,
                                            std::optional<Partition>,
                                            std::optional<MatQ>,
                                            const AnalysisOptions&);
template BoundReport partition_bound<Rational>(const Graph&,
                                              const HeterogeneousDynamics&,
                                              std::optional<Partition>,
                                              const AnalysisOptions&);
template BoundReport partition_bound<double>(const Graph&,
                                            const HeterogeneousDynamics&,
                                            std::optional<Partition>,
                                            const AnalysisOptions&);
template BoundReport switching_bound<Rational>(const SwitchingFamily&,
                                              std::span<const Partition>,
                                              const AnalysisOptions&);
template BoundReport switching_bound<double>(const SwitchingFamily&,
                                            std::span<const Partition>,
                                            const AnalysisOptions&);
template UnionReport<Rational> union_analysis(std::span<const Graph>,
                                              const Dynamics&, UnionAFactor,
                                              const AnalysisOptions&);
template UnionReport<double> union_analysis(std::span<const Graph>,
                                            const Dynamics&, UnionAFactor,
                                            const AnalysisOptions&);
template ObservabilityReport<Rational> observability(
    const Graph&, const Dynamics&, std::optional<Partition>,
    std::optional<MatQ>, const AnalysisOptions&);
template ObservabilityReport<double> observability(const Graph&,
                                                   const Dynamics&,
                                                   std::optional<Partition>,
                                                   std::optional<MatQ>,
                                                   const AnalysisOptions&);

}  // namespace matnet
