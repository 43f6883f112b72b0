#include "matnet/report.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <sstream>

#include "matnet/analysis.hpp"
#include "matnet/corpus.hpp"
#include "matnet/dot_export.hpp"

namespace matnet {

using nlohmann::json;

namespace {

constexpr const char* kReportSchema = "matnet-report/1";
constexpr int kMaxInlineBlockSide = 12;

json matq_json(const MatQ& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) {
      const Rational& v = m(r, c);
      if (v.is_integer() && v.abs() <= Rational{1LL << 53})
        row.push_back(std::stoll(v.str()));
      else
        row.push_back(v.str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json matd_json(const MatD& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
json mat_json(const Matrix<T>& m) {
  if constexpr (std::is_same_v<T, Rational>)
    return matq_json(m);
  else
    return matd_json(m);
}

json partition_json(const Partition& pi) {
  json cells = json::array();
  for (const auto& cell : pi.cells()) {
    json jc = json::array();
    for (int v : cell) jc.push_back(v + 1);
    cells.push_back(std::move(jc));
  }
  return cells;
}

json warnings_json(const NetworkSpec& spec) {
  json warnings = json::array();
  auto scan = [&](const std::vector<WeightedEdge>& edges,
                  const std::string& where) {
    for (const WeightedEdge& e : edges)
      if (classify_definiteness(e.weight) == Definiteness::indefinite)
        warnings.push_back(where + "edge " + std::to_string(e.i + 1) + "-" +
                           std::to_string(e.j + 1) +
                           ": indefinite weight magnitude");
  };
  scan(spec.edges, "");
  for (const TopologySpec& t : spec.topologies)
    scan(t.edges, t.name.empty() ? "member: " : t.name + ": ");
  if (spec.laplacian_override) {
    if (!spec.laplacian_override->is_symmetric())
      warnings.push_back("laplacian_override: not symmetric");
  }
  return warnings;
}

json common_header(const NetworkSpec& spec, const std::string& command,
                   const RunOptions& opts) {
  json doc;
  doc["schema"] = kReportSchema;
  doc["command"] = command;
  doc["backend"] = backend_name(opts.backend);
  json input;
  input["name"] = spec.name;
  input["n"] = spec.n;
  input["d"] = spec.d;
  json leaders = json::array();
  for (int l : spec.leaders) leaders.push_back(l + 1);
  input["leaders"] = std::move(leaders);
  doc["input"] = std::move(input);
  doc["warnings"] = warnings_json(spec);
  return doc;
}

template <typename T>
json verdict_json(const ControllabilityVerdict<T>& v) {
  json out;
  out["controllable"] = v.controllable;
  out["subspace_dim"] = v.subspace_dim;
  out["ambient_dim"] = v.ambient_dim;
  return out;
}

json bound_json(const BoundReport& b) {
  json out;
  out["applicable"] = b.applicable;
  if (!b.applicable) {
    out["reason"] = b.reason;
    return out;
  }
  out["bound"] = b.bound;
  out["achieved_dim"] = b.achieved_dim;
  out["tight"] = b.tight;
  out["containment_verified"] = b.containment_verified;
  out["partition"] = partition_json(b.partition_used);
  if (b.declares_uncontrollable)
    out["declares_uncontrollable"] = *b.declares_uncontrollable;
  out["complete_control_input"] = b.complete_control_input;
  if (b.bound_violated) out["bound_violated"] = true;
  return out;
}

template <typename T>
json certificate_json(const QCertificate<T>& cert, int d) {
  json out;
  out["exists"] = cert.exists;
  switch (cert.variant) {
    case CertificateVariant::fixed: out["variant"] = "fixed"; break;
    case CertificateVariant::heterogeneous:
      out["variant"] = "heterogeneous";
      break;
    case CertificateVariant::dual: out["variant"] = "dual"; break;
  }
  if (!cert.exists) {
    out["failing_equation"] = cert.failing_equation;
    return out;
  }
  out["verified"] = cert.verified;
  const int k = static_cast<int>(cert.qij.size());
  if (k * d <= kMaxInlineBlockSide) {
    json q1 = json::array();
    for (const auto& b : cert.q1) q1.push_back(mat_json(b));
    out["q1_blocks"] = std::move(q1);
    json grid = json::array();
    for (const auto& row : cert.qij) {
      json jr = json::array();
      for (const auto& b : row) jr.push_back(mat_json(b));
      grid.push_back(std::move(jr));
    }
    out["qij_blocks"] = std::move(grid);
  } else {
    out["blocks_omitted"] = "quotient larger than inline limit";
  }
  return out;
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

CommandResult finish(json doc, std::string summary, const Timer& timer,
                     const RunOptions& opts, int exit_code = 0) {
  if (opts.include_timing) doc["timing_ms"] = timer.ms();
  std::ostringstream human;
  human << summary;
  human << " (" << timer.ms() << " ms)";
  return CommandResult{doc.dump(2) + "\n", human.str(), std::nullopt,
                       exit_code};
}

template <typename F>
auto with_backend(Backend backend, F&& fn) {
  if (backend == Backend::exact)
    return fn.template operator()<Rational>();
  return fn.template operator()<double>();
}

}  // namespace

std::string backend_name(Backend b) {
  return b == Backend::exact ? "exact" : "float";
}

Backend backend_from_name(const std::string& name) {
  if (name == "exact") return Backend::exact;
  if (name == "float") return Backend::floating;
  throw ValidationError("backend", "expected 'exact' or 'float', got '" +
                                       name + "'");
}

CtrbMode ctrb_mode_from_name(const std::string& name) {
  if (name == "fixed") return CtrbMode::fixed;
  if (name == "heterogeneous") return CtrbMode::heterogeneous;
  if (name == "switching") return CtrbMode::switching;
  if (name == "union") return CtrbMode::union_graphs;
  throw ValidationError(
      "mode", "expected fixed|heterogeneous|switching|union, got '" + name +
                  "'");
}

CommandResult cmd_laplacian(const NetworkSpec& spec, const RunOptions& opts) {
  Timer timer;
  json doc = common_header(spec, "laplacian", opts);
  const MatQ l =
      spec.laplacian_override ? *spec.laplacian_override : spec.graph().laplacian();
  doc["override_used"] = spec.laplacian_override.has_value();
  if (opts.backend == Backend::exact)
    doc["laplacian"] = matq_json(l);
  else
    doc["laplacian"] = matd_json(to_double(l));
  std::ostringstream summary;
  summary << "laplacian: " << l.rows() << "x" << l.cols()
          << (spec.laplacian_override ? " (override)" : "");
  return finish(std::move(doc), summary.str(), timer, opts);
}

CommandResult cmd_ep(const NetworkSpec& spec, const RunOptions& opts) {
  Timer timer;
  json doc = common_header(spec, "ep", opts);
  const Graph g = spec.graph();

  Partition pi = Partition::singletons(spec.n);
  bool given = false;
  if (opts.partition_text) {
    pi = parse_partition(*opts.partition_text, spec.n);
    given = true;
  } else {
    pi = coarsest_ep(g, leader_init(g));
  }
  doc["partition"] = partition_json(pi);
  doc["partition_source"] = given ? "given" : "coarsest";

  const EpWitness witness =
      opts.backend == Backend::exact
          ? is_equitable(g, pi)
          : is_equitable(g, pi, AnalysisOptions{}.effective_ep_tolerance());
  doc["equitable"] = witness.equitable;
  if (witness.violation) {
    const EpViolation& v = *witness.violation;
    json jv;
    jv["cell_pair"] = {v.cell_a + 1, v.cell_b + 1};
    jv["node_pair"] = {v.node_r + 1, v.node_s + 1};
    jv["sign_class"] = v.sign_class == EdgeSign::positive ? "+" : "-";
    jv["sum_r"] = matq_json(v.sum_r);
    jv["sum_s"] = matq_json(v.sum_s);
    doc["violation"] = std::move(jv);
  }

  CommandResult result;
  // The quotient is an exact construction; under the float backend a
  // partition may pass the tolerance check without being exactly equitable,
  // in which case the quotient is omitted rather than fabricated.
  if (witness.equitable && is_equitable(g, pi).equitable) {
    doc["quotient_laplacian"] =
        opts.backend == Backend::exact
            ? matq_json(quotient_laplacian(g, pi))
            : matd_json(to_double(quotient_laplacian(g, pi)));
    result.dot = quotient_dot(g, pi);
  }
  std::ostringstream summary;
  summary << "ep: " << format_partition(pi) << " ("
          << (given ? "given" : "coarsest") << ") equitable="
          << (witness.equitable ? "yes" : "no");
  CommandResult finished = finish(std::move(doc), summary.str(), timer, opts);
  finished.dot = std::move(result.dot);
  return finished;
}

CommandResult cmd_ctrb(const NetworkSpec& spec, CtrbMode mode,
                       const RunOptions& opts) {
  Timer timer;
  json doc = common_header(spec, "ctrb", opts);
  const AnalysisOptions aopts;

  switch (mode) {
    case CtrbMode::fixed: {
      doc["mode"] = "fixed";
      const Graph g = spec.graph();
      const Dynamics& dyn = spec.shared_dynamics();
      const MatQ laplacian =
          spec.laplacian_override ? *spec.laplacian_override : g.laplacian();
      with_backend(opts.backend, [&]<typename T>() {
        const auto verdict = ctrb<T>(assemble_fixed(g, dyn, laplacian), aopts);
        doc["controllability"] = verdict_json(verdict);
        const Partition ep = coarsest_ep(g, leader_init(g));
        const auto cert = q_certificate<T>(laplacian, ep, dyn,
                                           CertificateVariant::fixed, spec.d,
                                           aopts);
        doc["certificate"] = certificate_json(cert, spec.d);
        doc["partition_bound"] = bound_json(partition_bound<T>(
            g, dyn, ep, spec.laplacian_override, aopts));
      });
      break;
    }
    case CtrbMode::heterogeneous: {
      doc["mode"] = "heterogeneous";
      if (!spec.per_node)
        throw ValidationError("per_node_dynamics",
                              "required for heterogeneous mode");
      const Graph g = spec.graph();
      with_backend(opts.backend, [&]<typename T>() {
        const auto verdict =
            ctrb<T>(assemble_heterogeneous(g, *spec.per_node), aopts);
        doc["controllability"] = verdict_json(verdict);
        const Partition ep =
            coarsest_ep(g, dynamics_refined_init(g, *spec.per_node));
        doc["cell_homogeneous"] = cell_homogeneous(*spec.per_node, ep);
        const auto cert =
            q_certificate<T>(g.laplacian(), ep, *spec.per_node, spec.d, aopts);
        doc["certificate"] = certificate_json(cert, spec.d);
        doc["partition_bound"] =
            bound_json(partition_bound<T>(g, *spec.per_node, ep, aopts));
      });
      break;
    }
    case CtrbMode::switching: {
      doc["mode"] = "switching";
      if (spec.topologies.empty())
        throw ValidationError("topologies", "required for switching mode");
      const auto graphs = spec.member_graphs();
      const SwitchingFamily family =
          make_switching_family(graphs, spec.shared_dynamics());
      with_backend(opts.backend, [&]<typename T>() {
        const auto verdict = switching_ctrb<T>(family, aopts);
        doc["controllability"] = verdict_json(verdict);
        doc["member_count"] = static_cast<int>(family.members.size());
        json eps = json::array();
        for (const Graph& g : graphs)
          eps.push_back(partition_json(coarsest_ep(g, leader_init(g))));
        doc["member_eps"] = std::move(eps);
        doc["partition_bound"] = bound_json(switching_bound<T>(family, {}, aopts));
      });
      break;
    }
    case CtrbMode::union_graphs: {
      doc["mode"] = "union";
      if (spec.topologies.empty())
        throw ValidationError("topologies", "required for union mode");
      const auto graphs = spec.member_graphs();
      with_backend(opts.backend, [&]<typename T>() {
        const UnionReport<T> report = union_analysis<T>(
            graphs, spec.shared_dynamics(), opts.union_a_factor, aopts);
        doc["union"] = verdict_json(report.union_verdict);
        doc["switched"] = verdict_json(report.switched_verdict);
        doc["union_a_factor"] =
            opts.union_a_factor == UnionAFactor::t ? "t" : "1";
        json eps = json::array();
        for (const Partition& ep : report.member_eps)
          eps.push_back(partition_json(ep));
        doc["member_eps"] = std::move(eps);
        doc["union_ep"] = partition_json(report.union_ep);
        if (report.union_declared_uncontrollable)
          doc["union_declares_uncontrollable"] =
              *report.union_declared_uncontrollable;
        doc["sufficiency_checked"] = report.sufficiency_checked;
        doc["sufficiency_holds"] = report.sufficiency_holds;
        doc["nontrivial_cell_rule_applicable"] =
            report.nontrivial_cell_rule_applicable;
        doc["nontrivial_cell_rule_consistent"] =
            report.nontrivial_cell_rule_consistent;
        doc["indeterminate_by_rules"] = report.indeterminate_by_rules;
      });
      break;
    }
  }

  std::ostringstream summary;
  summary << "ctrb[" << doc["mode"].get<std::string>() << "]: ";
  if (doc.contains("controllability"))
    summary << "dim " << doc["controllability"]["subspace_dim"] << "/"
            << doc["controllability"]["ambient_dim"]
            << (doc["controllability"]["controllable"].get<bool>()
                    ? " controllable"
                    : " uncontrollable");
  else
    summary << "switched dim " << doc["switched"]["subspace_dim"] << "/"
            << doc["switched"]["ambient_dim"] << ", union dim "
            << doc["union"]["subspace_dim"];
  return finish(std::move(doc), summary.str(), timer, opts);
}

CommandResult cmd_obsv(const NetworkSpec& spec, const RunOptions& opts) {
  Timer timer;
  json doc = common_header(spec, "obsv", opts);
  const Graph g = spec.graph();
  const Dynamics& dyn = spec.shared_dynamics();
  const AnalysisOptions aopts;
  with_backend(opts.backend, [&]<typename T>() {
    const auto report =
        observability<T>(g, dyn, {}, spec.laplacian_override, aopts);
    json jo;
    jo["observable"] = report.observable;
    jo["dual"] = verdict_json(report.dual_verdict);
    jo["partition"] = partition_json(report.ep);
    jo["declares_unobservable_applicable"] =
        report.declares_unobservable_applicable;
    jo["declares_unobservable"] = report.declares_unobservable;
    jo["first_order"] = report.first_order;
    if (report.first_order_joint_verdict)
      jo["first_order_joint_verdict"] = *report.first_order_joint_verdict;
    doc["observability"] = std::move(jo);
    doc["certificate"] = certificate_json(report.q_star, spec.d);
  });
  std::ostringstream summary;
  summary << "obsv: dual dim "
          << doc["observability"]["dual"]["subspace_dim"] << "/"
          << doc["observability"]["dual"]["ambient_dim"]
          << (doc["observability"]["observable"].get<bool>()
                  ? " observable"
                  : " unobservable");
  return finish(std::move(doc), summary.str(), timer, opts);
}

CommandResult cmd_corpus(const RunOptions& opts) {
  Timer timer;
  json doc;
  doc["schema"] = kReportSchema;
  doc["command"] = "corpus";
  doc["backend"] = backend_name(opts.backend);
  const std::vector<CorpusOutcome> outcomes = run_corpus(opts.backend);
  bool all = true;
  json results = json::array();
  std::ostringstream summary;
  for (const CorpusOutcome& o : outcomes) {
    json jr;
    jr["id"] = o.id;
    jr["passed"] = o.passed;
    jr["detail"] = o.detail;
    for (const CorpusExample& ex : corpus())
      if (ex.id == o.id && !ex.notes.empty()) jr["notes"] = ex.notes;
    results.push_back(std::move(jr));
    all = all && o.passed;
    summary << (o.passed ? "[PASS] " : "[FAIL] ") << o.id << ": " << o.detail
            << "\n";
  }
  doc["results"] = std::move(results);
  doc["all_passed"] = all;
  summary << (all ? "corpus: all examples passed"
                  : "corpus: regression detected");
  return finish(std::move(doc), summary.str(), timer, opts, all ? 0 : 3);
}

}  // namespace matnet
