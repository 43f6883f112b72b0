#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "matnet/graph.hpp"
#include "matnet/partition.hpp"
#include "matnet/system.hpp"

namespace matnet {

/// Raised on malformed or inconsistent input documents; `where` is a
/// JSON-path-like locator such as "edges[2].weight".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// One switching/union member: a named edge set over the shared node set.
struct TopologySpec {
  std::string name;
  std::vector<WeightedEdge> edges;
};

/// Parsed network document. Node ids inside are already 0-based; the JSON
/// format is 1-based.
struct NetworkSpec {
  std::string name;
  int n = 0;
  int d = 0;
  std::vector<int> leaders;
  std::vector<WeightedEdge> edges;       // fixed-topology edge set
  std::optional<Dynamics> dynamics;      // shared dynamics
  std::optional<HeterogeneousDynamics> per_node;  // heterogeneous variant
  std::vector<TopologySpec> topologies;  // switching/union members
  std::optional<MatQ> laplacian_override;

  Graph graph() const;                      // from `edges`
  Graph graph(const TopologySpec& t) const;
  std::vector<Graph> member_graphs() const;
  const Dynamics& shared_dynamics() const;  // throws when absent
};

/// Parses and validates a spec document. Structural JSON errors carry the
/// parser's position; semantic errors carry a field locator.
NetworkSpec parse_spec(const std::string& json_text);
NetworkSpec load_spec_file(const std::string& path);

/// Canonical serialization; parse(serialize(s)) == s field-for-field.
std::string serialize_spec(const NetworkSpec& spec);

/// Partition literal of the CLI, e.g. "1|2,3|4" (1-based ids).
Partition parse_partition(const std::string& text, int node_count);
std::string format_partition(const Partition& pi);

}  // namespace matnet
