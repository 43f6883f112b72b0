#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matnet/linalg.hpp"
#include "matnet/partition.hpp"
#include "matnet/system.hpp"

namespace matnet {

/// Backend-scoped analysis knobs. The scalar type T of each entry point
/// selects the backend (Rational = exact, double = float + tolerances).
struct AnalysisOptions {
  linalg::FloatOptions float_opts;
  /// Tolerance for float-backend equitable-partition comparisons; negative
  /// derives a default from machine epsilon.
  double ep_tolerance = -1.0;

  double effective_ep_tolerance() const;
};

template <typename T>
struct ControllabilityVerdict {
  bool controllable = false;
  int subspace_dim = 0;
  int ambient_dim = 0;
  linalg::SubspaceBasis<T> basis;
};

enum class CertificateVariant { fixed, heterogeneous, dual };

/// Solution blocks of the intertwining equations tying the stacked system to
/// the quotient: when they all exist, L~ P~_pi = P~_pi Q holds and im(P~_pi)
/// is L~-invariant.
template <typename T>
struct QCertificate {
  bool exists = false;
  CertificateVariant variant = CertificateVariant::fixed;
  /// Diagonal blocks: a single entry for fixed/dual, one per cell for the
  /// heterogeneous variant.
  std::vector<Matrix<T>> q1;
  /// k x k grid of coupling blocks.
  std::vector<std::vector<Matrix<T>>> qij;
  /// Identifier of the first unsolvable equation, e.g. "q1" or "q[2][3]".
  std::string failing_equation;
  /// Set when the re-verification of the assembled identity failed (float
  /// backend only; exact assembly verifies by construction).
  bool verified = false;
};

/// Equitable-partition bound report. `bound` is rank of the lifted
/// characteristic matrix; `tight` when the achieved dimension meets it.
struct BoundReport {
  bool applicable = false;
  std::string reason;  // why not applicable, empty otherwise
  int bound = 0;
  int achieved_dim = 0;
  int ambient_dim = 0;
  Partition partition_used = Partition::singletons(1);
  bool tight = false;
  bool containment_verified = false;
  /// Present when the certificate exists: nontrivial cells force an
  /// uncontrollable verdict.
  std::optional<bool> declares_uncontrollable;
  bool complete_control_input = false;  // C invertible
  bool bound_violated = false;          // achieved > bound (never expected)
};

/// Kalman verdict via the invariant-image fixpoint: the controllable
/// subspace is the smallest l_tilde-invariant subspace containing
/// im(m_tilde), and its dimension equals the rank of the controllability
/// matrix [M~, L~ M~, ..., L~^{dn-1} M~].
template <typename T>
ControllabilityVerdict<T> ctrb(const AugmentedSystem& sys,
                               const AnalysisOptions& opts = {});

/// Controllable set of a switching family: fixpoint over all member maps.
template <typename T>
ControllabilityVerdict<T> switching_ctrb(const SwitchingFamily& family,
                                         const AnalysisOptions& opts = {});

/// Certificate for the fixed (variant=fixed) or transposed (variant=dual)
/// system, solving A C = C Q1 (resp. A^T C = C Q1) and the per-block
/// coupling equations against the quotient of `laplacian` over `pi`.
/// `laplacian` is the effective dn x dn matrix (graph Laplacian or override).
/// Callers supply an equitable `pi`; the bound and report entry points
/// enforce that. A non-quotientable pair fails with "quotient".
template <typename T>
QCertificate<T> q_certificate(const MatQ& laplacian, const Partition& pi,
                              const Dynamics& dyn, CertificateVariant variant,
                              int d, const AnalysisOptions& opts = {});

/// Heterogeneous certificate; requires (A_i, B_i) constant on every cell.
template <typename T>
QCertificate<T> q_certificate(const MatQ& laplacian, const Partition& pi,
                              const HeterogeneousDynamics& dyn, int d,
                              const AnalysisOptions& opts = {});

/// True when (A_i, B_i) agree within every cell of pi.
bool cell_homogeneous(const HeterogeneousDynamics& dyn, const Partition& pi);

/// Refinement of leader_init(g) that also separates nodes with different
/// (A_i, B_i); starting point for heterogeneous EP discovery.
Partition dynamics_refined_init(const Graph& g,
                                const HeterogeneousDynamics& dyn);

/// Upper bound im(P~_pi) on the controllable subspace of the fixed system,
/// with the necessary-condition verdict: nontrivial cells + existing
/// certificate imply uncontrollable. `pi` defaults to the coarsest
/// leader-respecting EP; `laplacian_override` substitutes the graph
/// Laplacian everywhere when present.
template <typename T>
BoundReport partition_bound(const Graph& g, const Dynamics& dyn,
                           std::optional<Partition> pi = {},
                           std::optional<MatQ> laplacian_override = {},
                           const AnalysisOptions& opts = {});

/// Heterogeneous analog (certificate per cell dynamics).
template <typename T>
BoundReport partition_bound(const Graph& g, const HeterogeneousDynamics& dyn,
                           std::optional<Partition> pi = {},
                           const AnalysisOptions& opts = {});

/// Switching bound: card(join of member EPs) * d, compared against the
/// achieved switched dimension. Partitions default to per-member coarsest
/// leader-respecting EPs.
template <typename T>
BoundReport switching_bound(const SwitchingFamily& family,
                           std::span<const Partition> partitions = {},
                           const AnalysisOptions& opts = {});

/// Union-versus-switched relationship for one family of graphs.
template <typename T>
struct UnionReport {
  ControllabilityVerdict<T> union_verdict;
  ControllabilityVerdict<T> switched_verdict;
  std::vector<Partition> member_eps;
  std::vector<bool> member_cert_exists;
  std::vector<bool> member_has_nontrivial_cell;
  Partition union_ep = Partition::singletons(1);
  std::optional<bool> union_declared_uncontrollable;  // via union-graph EP

  /// Sufficiency direction: union controllable must imply switched
  /// controllable. `checked` when the hypothesis fired; `holds` records it.
  bool sufficiency_checked = false;
  bool sufficiency_holds = false;

  /// Necessity via nontrivial member cells: applicable when every member
  /// certificate exists and some member has a nontrivial cell; then the
  /// union must be uncontrollable.
  bool nontrivial_cell_rule_applicable = false;
  bool nontrivial_cell_rule_consistent = false;

  /// Union uncontrollable while the switched system is controllable: the
  /// rules above decide nothing; flagged for the report.
  bool indeterminate_by_rules = false;
};

template <typename T>
UnionReport<T> union_analysis(std::span<const Graph> graphs,
                              const Dynamics& dyn,
                              UnionAFactor factor = UnionAFactor::t,
                              const AnalysisOptions& opts = {});

/// Observability of the leader-output system, decided on the dual:
/// observable iff the transposed system is controllable. When the dual
/// certificate exists and the partition has a nontrivial cell, the system is
/// declared unobservable.
template <typename T>
struct ObservabilityReport {
  bool observable = false;
  ControllabilityVerdict<T> dual_verdict;
  QCertificate<T> q_star;
  Partition ep = Partition::singletons(1);
  bool declares_unobservable_applicable = false;
  bool declares_unobservable = false;
  bool first_order = false;  // A = 0, B = K = C = I
  /// First-order joint verdict: with nontrivial cells the system is both
  /// uncontrollable and unobservable.
  std::optional<bool> first_order_joint_verdict;
};

template <typename T>
ObservabilityReport<T> observability(const Graph& g, const Dynamics& dyn,
                                     std::optional<Partition> pi = {},
                                     std::optional<MatQ> laplacian_override = {},
                                     const AnalysisOptions& opts = {});

// Instantiated for Rational and double in analysis.cpp.

}  // namespace matnet
