#include "matnet/corpus.hpp"

#include <array>
#include <sstream>

#include "matnet/analysis.hpp"

namespace matnet {

namespace {

// Shared weight blocks of the example networks.
//   W1 = [[1,2],[2,1]]   W2 = [[2,1],[1,2]]
// and shared dynamics A = K = I2, B = C = 2 I2 unless noted.

constexpr const char* kExample1 = R"JSON({
  "schema": "matnet/1",
  "name": "example1",
  "n": 4, "d": 2,
  "leaders": [1],
  "edges": [
    {"i": 1, "j": 2, "sign": "+", "weight": [[1,2],[2,1]]},
    {"i": 1, "j": 3, "sign": "+", "weight": [[1,2],[2,1]]},
    {"i": 2, "j": 4, "sign": "-", "weight": [[2,1],[1,2]]},
    {"i": 3, "j": 4, "sign": "-", "weight": [[2,1],[1,2]]}
  ],
  "dynamics": {
    "a": [[1,0],[0,1]], "b": [[2,0],[0,2]],
    "k": [[1,0],[0,1]], "c": [[2,0],[0,2]]
  },
  "laplacian_override": [
    [ 2,  4, -1, -2, -1, -2,  0,  0],
    [ 4,  2, -2, -1, -2, -1,  0,  0],
    [-1, -2, -1,  1,  0,  0, -2, -1],
    [-2, -1,  1, -1,  0,  0, -1, -2],
    [-1, -2,  0,  0, -1,  1, -2, -1],
    [-2, -1,  0,  0,  1, -1, -1, -2],
    [ 0,  0, -2, -1, -2, -1, -4, -2],
    [ 0,  0, -1, -2, -1, -2, -2, -4]
  ]
})JSON";

constexpr const char* kExample2 = R"JSON({
  "schema": "matnet/1",
  "name": "example2",
  "n": 4, "d": 2,
  "leaders": [1],
  "topologies": [
    {"name": "a", "edges": [
      {"i": 1, "j": 2, "sign": "+", "weight": [[1,2],[2,1]]},
      {"i": 1, "j": 3, "sign": "+", "weight": [[1,2],[2,1]]},
      {"i": 1, "j": 4, "sign": "+", "weight": [[1,2],[2,1]]}
    ]},
    {"name": "b", "edges": [
      {"i": 1, "j": 2, "sign": "+", "weight": [[1,2],[2,1]]},
      {"i": 1, "j": 3, "sign": "+", "weight": [[1,2],[2,1]]},
      {"i": 1, "j": 4, "sign": "+", "weight": [[1,2],[2,1]]},
      {"i": 2, "j": 3, "sign": "+", "weight": [[1,2],[2,1]]}
    ]}
  ],
  "dynamics": {
    "a": [[1,0],[0,1]], "b": [[2,0],[0,2]],
    "k": [[1,0],[0,1]], "c": [[2,0],[0,2]]
  }
})JSON";

constexpr const char* kExample3 = R"JSON({
  "schema": "matnet/1",
  "name": "example3",
  "n": 4, "d": 2,
  "leaders": [1],
  "edges": [
    {"i": 1, "j": 2, "sign": "+", "weight": [[1,2],[2,1]]},
    {"i": 1, "j": 3, "sign": "+", "weight": [[1,2],[2,1]]},
    {"i": 2, "j": 4, "sign": "-", "weight": [[2,1],[1,2]]},
    {"i": 3, "j": 4, "sign": "-", "weight": [[2,1],[1,2]]}
  ],
  "dynamics": {
    "a": [[1,0],[0,1]], "b": [[2,0],[0,2]],
    "k": [[1,0],[0,1]], "c": [[2,0],[0,2]]
  },
  "per_node_dynamics": [
    {"a": [[1,0],[0,1]]},
    {"a": [[2,1],[1,2]]},
    {"a": [[2,1],[1,2]]},
    {"a": [[1,2],[2,1]]}
  ]
})JSON";

constexpr const char* kExample4 = R"JSON({
  "schema": "matnet/1",
  "name": "example4",
  "n": 3, "d": 2,
  "leaders": [1],
  "topologies": [
    {"name": "a", "edges": [
      {"i": 1, "j": 2, "sign": "+", "weight": [[1,2],[2,1]]}
    ]},
    {"name": "b", "edges": [
      {"i": 1, "j": 3, "sign": "+", "weight": [[1,2],[2,1]]}
    ]}
  ],
  "dynamics": {
    "a": [[1,0],[0,1]], "b": [[2,0],[0,2]],
    "k": [[1,0],[0,1]], "c": [[2,0],[0,2]]
  }
})JSON";

constexpr const char* kExample5 = R"JSON({
  "schema": "matnet/1",
  "name": "example5",
  "n": 3, "d": 2,
  "leaders": [1],
  "topologies": [
    {"name": "a", "edges": [
      {"i": 1, "j": 2, "sign": "+", "weight": [[1,2],[2,1]]},
      {"i": 1, "j": 3, "sign": "+", "weight": [[1,2],[2,1]]}
    ]},
    {"name": "b", "edges": [
      {"i": 2, "j": 3, "sign": "+", "weight": [[1,2],[2,1]]}
    ]}
  ],
  "dynamics": {
    "a": [[1,0],[0,1]], "b": [[2,0],[0,2]],
    "k": [[1,0],[0,1]], "c": [[2,0],[0,2]]
  }
})JSON";

constexpr const char* kExample6 = R"JSON({
  "schema": "matnet/1",
  "name": "example6",
  "n": 4, "d": 2,
  "leaders": [1],
  "edges": [
    {"i": 1, "j": 2, "sign": "+", "weight": [[1,2],[2,1]]},
    {"i": 1, "j": 3, "sign": "+", "weight": [[1,2],[2,1]]},
    {"i": 2, "j": 4, "sign": "-", "weight": [[2,1],[1,2]]},
    {"i": 3, "j": 4, "sign": "-", "weight": [[2,1],[1,2]]}
  ],
  "dynamics": {
    "a": [[1,0],[0,1]], "b": [[2,0],[0,2]],
    "k": [[1,0],[0,1]], "c": [[2,0],[0,2]]
  },
  "laplacian_override": [
    [ 2,  4, -1, -2, -1, -2,  0,  0],
    [ 4,  2, -2, -1, -2, -1,  0,  0],
    [-1, -2, -1,  1,  0,  0, -2, -1],
    [-2, -1,  1, -1,  0,  0, -1, -2],
    [-1, -2,  0,  0, -1,  1, -2, -1],
    [-2, -1,  0,  0,  1, -1, -1, -2],
    [ 0,  0, -2, -1, -2, -1, -4, -2],
    [ 0,  0, -1, -2, -1, -2, -2, -4]
  ]
})JSON";

const std::array<CorpusExample, 6> kCorpus = {{
    {
        "example1",
        "fixed topology with a nontrivial cell",
        "Edge signs (1-2, 1-3 positive; 2-4, 3-4 negative) are inferred from "
        "the published Laplacian, whose diagonal mixes signed and magnitude "
        "notation; the override matrix reproduces that Laplacian verbatim.",
        kExample1,
        CorpusExample::Kind::fixed,
        8, 6, false, std::nullopt, std::nullopt, std::string("1|2,3|4"), 6,
    },
    {
        "example2",
        "switching topologies sharing a coarse bound",
        "Member (b) is the leader star plus follower edge 2-3: the published "
        "member-(b) Laplacian (edges 1-2, 1-4 only) contradicts both the "
        "published partition {{1},{2,3},{4}} and the published dimension 4; "
        "this reading reproduces both.",
        kExample2,
        CorpusExample::Kind::switching,
        8, 4, false, std::nullopt, std::nullopt, std::nullopt, 4,
    },
    {
        "example3",
        "heterogeneous dynamics, homogeneous within cells",
        "Topology and weights are those of example1; per-node state matrices "
        "are A1 = I, A2 = A3 = [[2,1],[1,2]], A4 = [[1,2],[2,1]] (the "
        "published list misprints duplicate indices).",
        kExample3,
        CorpusExample::Kind::heterogeneous,
        8, 6, false, std::nullopt, std::nullopt, std::string("1|2,3|4"), 6,
    },
    {
        "example4",
        "union uncontrollable while switching is controllable",
        "",
        kExample4,
        CorpusExample::Kind::union_graphs,
        6, 6, true, 4, false, std::nullopt, std::nullopt,
    },
    {
        "example5",
        "union with nontrivial member cells",
        "",
        kExample5,
        CorpusExample::Kind::union_graphs,
        6, 4, false, 4, false, std::string("1|2,3"), std::nullopt,
    },
    {
        "example6",
        "unobservable leader-output network",
        "Same network and override as example1; node 1 doubles as the output "
        "point.",
        kExample6,
        CorpusExample::Kind::observability,
        8, 6, false, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
    },
}};

template <typename T>
CorpusOutcome check_example(const CorpusExample& ex) {
  CorpusOutcome outcome{ex.id, false, ""};
  std::ostringstream detail;
  bool ok = true;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << (detail.tellp() > 0 ? "; " : "") << what;
    }
  };

  const NetworkSpec spec = parse_spec(ex.spec_json);
  const AnalysisOptions opts;

  switch (ex.kind) {
    case CorpusExample::Kind::fixed: {
      const Graph g = spec.graph();
      const MatQ laplacian = spec.laplacian_override ? *spec.laplacian_override
                                                     : g.laplacian();
      const auto verdict =
          ctrb<T>(assemble_fixed(g, spec.shared_dynamics(), laplacian), opts);
      expect(verdict.subspace_dim == ex.expected_dim,
             "dim " + std::to_string(verdict.subspace_dim) + " != " +
                 std::to_string(ex.expected_dim));
      expect(verdict.controllable == ex.expected_positive, "verdict mismatch");
      const Partition ep = coarsest_ep(g, leader_init(g));
      if (ex.expected_ep)
        expect(format_partition(ep) == *ex.expected_ep,
               "ep " + format_partition(ep));
      const BoundReport bound = partition_bound<T>(
          g, spec.shared_dynamics(), ep, spec.laplacian_override, opts);
      if (ex.expected_bound) {
        expect(bound.applicable, "bound not applicable");
        expect(bound.bound == *ex.expected_bound,
               "bound " + std::to_string(bound.bound));
        expect(bound.containment_verified, "containment failed");
      }
      detail << (detail.tellp() > 0 ? "; " : "") << "dim "
             << verdict.subspace_dim << "/" << verdict.ambient_dim;
      break;
    }
    case CorpusExample::Kind::switching: {
      const auto graphs = spec.member_graphs();
      const SwitchingFamily family =
          make_switching_family(graphs, spec.shared_dynamics());
      const auto verdict = switching_ctrb<T>(family, opts);
      expect(verdict.subspace_dim == ex.expected_dim,
             "dim " + std::to_string(verdict.subspace_dim));
      const BoundReport bound = switching_bound<T>(family, {}, opts);
      if (ex.expected_bound) {
        expect(bound.applicable, "bound not applicable");
        expect(bound.bound == *ex.expected_bound,
               "bound " + std::to_string(bound.bound));
        expect(bound.tight, "bound not tight");
      }
      detail << (detail.tellp() > 0 ? "; " : "") << "dim "
             << verdict.subspace_dim << "/" << verdict.ambient_dim;
      break;
    }
    case CorpusExample::Kind::heterogeneous: {
      const Graph g = spec.graph();
      if (!spec.per_node) throw ValidationError("per_node_dynamics", "missing");
      const auto verdict =
          ctrb<T>(assemble_heterogeneous(g, *spec.per_node), opts);
      expect(verdict.subspace_dim == ex.expected_dim,
             "dim " + std::to_string(verdict.subspace_dim));
      expect(verdict.controllable == ex.expected_positive, "verdict mismatch");
      const Partition ep = coarsest_ep(g, dynamics_refined_init(g, *spec.per_node));
      if (ex.expected_ep)
        expect(format_partition(ep) == *ex.expected_ep,
               "ep " + format_partition(ep));
      expect(cell_homogeneous(*spec.per_node, ep), "cells not homogeneous");
      const BoundReport bound = partition_bound<T>(g, *spec.per_node, ep, opts);
      if (ex.expected_bound) {
        expect(bound.applicable, "bound not applicable");
        expect(bound.bound == *ex.expected_bound,
               "bound " + std::to_string(bound.bound));
      }
      detail << (detail.tellp() > 0 ? "; " : "") << "dim "
             << verdict.subspace_dim << "/" << verdict.ambient_dim;
      break;
    }
    case CorpusExample::Kind::union_graphs: {
      const auto graphs = spec.member_graphs();
      const UnionReport<T> report =
          union_analysis<T>(graphs, spec.shared_dynamics(), UnionAFactor::t,
                            opts);
      expect(report.switched_verdict.subspace_dim == ex.expected_dim,
             "switched dim " +
                 std::to_string(report.switched_verdict.subspace_dim));
      expect(report.switched_verdict.controllable == ex.expected_positive,
             "switched verdict mismatch");
      if (ex.expected_union_dim)
        expect(report.union_verdict.subspace_dim == *ex.expected_union_dim,
               "union dim " +
                   std::to_string(report.union_verdict.subspace_dim));
      if (ex.expected_union_controllable)
        expect(report.union_verdict.controllable ==
                   *ex.expected_union_controllable,
               "union verdict mismatch");
      if (ex.expected_ep)
        expect(format_partition(report.member_eps.front()) == *ex.expected_ep,
               "member ep " + format_partition(report.member_eps.front()));
      expect(report.sufficiency_holds, "sufficiency direction violated");
      expect(report.nontrivial_cell_rule_consistent,
             "nontrivial-cell rule violated");
      detail << (detail.tellp() > 0 ? "; " : "") << "switched "
             << report.switched_verdict.subspace_dim << ", union "
             << report.union_verdict.subspace_dim << "/"
             << report.union_verdict.ambient_dim;
      break;
    }
    case CorpusExample::Kind::observability: {
      const Graph g = spec.graph();
      const auto report = observability<T>(g, spec.shared_dynamics(), {},
                                           spec.laplacian_override, opts);
      expect(report.dual_verdict.subspace_dim == ex.expected_dim,
             "dual dim " + std::to_string(report.dual_verdict.subspace_dim));
      expect(report.observable == ex.expected_positive, "verdict mismatch");
      detail << (detail.tellp() > 0 ? "; " : "") << "dual dim "
             << report.dual_verdict.subspace_dim << "/"
             << report.dual_verdict.ambient_dim
             << (report.observable ? ", observable" : ", unobservable");
      break;
    }
  }

  outcome.passed = ok;
  outcome.detail = detail.str();
  return outcome;
}

}  // namespace

std::span<const CorpusExample> corpus() { return kCorpus; }

CorpusOutcome run_example(const CorpusExample& example, Backend backend) {
  try {
    return backend == Backend::exact ? check_example<Rational>(example)
                                     : check_example<double>(example);
  } catch (const std::exception& e) {
    return {example.id, false, std::string("exception: ") + e.what()};
  }
}

std::vector<CorpusOutcome> run_corpus(Backend backend) {
  std::vector<CorpusOutcome> outcomes;
  for (const CorpusExample& ex : kCorpus)
    outcomes.push_back(run_example(ex, backend));
  return outcomes;
}

}  // namespace matnet
