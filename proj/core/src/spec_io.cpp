#include "matnet/spec_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace matnet {

using nlohmann::json;

namespace {

constexpr const char* kSchema = "matnet/1";

Rational entry_to_rational(const json& v, const std::string& where) {
  try {
    if (v.is_number_integer()) return Rational{v.get<long long>()};
    if (v.is_string()) return Rational::from_string(v.get<std::string>());
    if (v.is_number_float()) {
      // Doubles are binary rationals; convert exactly.
      mpq_class q(v.get<double>());
      return Rational{q};
    }
  } catch (const std::invalid_argument& e) {
    throw ValidationError(where, e.what());
  }
  throw ValidationError(where, "expected integer, \"p/q\" string, or float");
}

MatQ parse_matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty() || !v[0].is_array())
    throw ValidationError(where, "expected an array of row arrays");
  const int rows = static_cast<int>(v.size());
  const int cols = static_cast<int>(v[0].size());
  MatQ m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = v[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ValidationError(where + "[" + std::to_string(r) + "]",
                            "ragged or non-array row");
    for (int c = 0; c < cols; ++c)
      m(r, c) = entry_to_rational(
          row[c], where + "[" + std::to_string(r) + "][" + std::to_string(c) +
                      "]");
  }
  return m;
}

json matrix_to_json(const MatQ& m) {
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

int parse_node_id(const json& v, int n, const std::string& where) {
  if (!v.is_number_integer())
    throw ValidationError(where, "expected 1-based node id");
  const int id = v.get<int>();
  if (id < 1 || id > n)
    throw ValidationError(where, "node id " + std::to_string(id) +
                                     " out of range 1.." + std::to_string(n));
  return id - 1;
}

std::vector<WeightedEdge> parse_edges(const json& v, int n, int d,
                                      const std::string& where) {
  if (!v.is_array()) throw ValidationError(where, "expected an array");
  std::vector<WeightedEdge> edges;
  for (size_t k = 0; k < v.size(); ++k) {
    const std::string ew = where + "[" + std::to_string(k) + "]";
    const json& e = v[k];
    if (!e.is_object()) throw ValidationError(ew, "expected an edge object");
    WeightedEdge edge;
    edge.i = parse_node_id(e.value("i", json()), n, ew + ".i");
    edge.j = parse_node_id(e.value("j", json()), n, ew + ".j");
    const std::string sign = e.value("sign", "+");
    if (sign == "+" || sign == "positive")
      edge.sign = EdgeSign::positive;
    else if (sign == "-" || sign == "negative")
      edge.sign = EdgeSign::negative;
    else
      throw ValidationError(ew + ".sign", "expected \"+\" or \"-\"");
    if (!e.contains("weight"))
      throw ValidationError(ew + ".weight", "missing");
    edge.weight = parse_matrix(e["weight"], ew + ".weight");
    if (edge.weight.rows() != d || edge.weight.cols() != d)
      throw ValidationError(ew + ".weight", "must be d x d");
    edges.push_back(std::move(edge));
  }
  return edges;
}

json edges_to_json(const std::vector<WeightedEdge>& edges) {
  json out = json::array();
  for (const WeightedEdge& e : edges) {
    json je;
    je["i"] = e.i + 1;
    je["j"] = e.j + 1;
    je["sign"] = e.sign == EdgeSign::positive ? "+" : "-";
    je["weight"] = matrix_to_json(e.weight);
    out.push_back(std::move(je));
  }
  return out;
}

}  // namespace

Graph NetworkSpec::graph() const {
  return Graph(n, d, edges, leaders);
}

Graph NetworkSpec::graph(const TopologySpec& t) const {
  return Graph(n, d, t.edges, leaders);
}

std::vector<Graph> NetworkSpec::member_graphs() const {
  std::vector<Graph> out;
  out.reserve(topologies.size());
  for (const TopologySpec& t : topologies) out.push_back(graph(t));
  return out;
}

const Dynamics& NetworkSpec::shared_dynamics() const {
  if (!dynamics)
    throw ValidationError("dynamics", "required for this command");
  return *dynamics;
}

NetworkSpec parse_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("json", e.what());
  }
  if (!doc.is_object()) throw ValidationError("", "top level must be an object");
  if (doc.value("schema", "") != kSchema)
    throw ValidationError("schema", "expected \"" + std::string(kSchema) + "\"");

  NetworkSpec spec;
  spec.name = doc.value("name", "");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw ValidationError("n", "missing node count");
  if (!doc.contains("d") || !doc["d"].is_number_integer())
    throw ValidationError("d", "missing state dimension");
  spec.n = doc["n"].get<int>();
  spec.d = doc["d"].get<int>();
  if (spec.n < 2) throw ValidationError("n", "need at least two nodes");
  if (spec.d < 1) throw ValidationError("d", "state dimension must be >= 1");

  if (!doc.contains("leaders") || !doc["leaders"].is_array() ||
      doc["leaders"].empty())
    throw ValidationError("leaders", "expected a nonempty array");
  for (size_t i = 0; i < doc["leaders"].size(); ++i)
    spec.leaders.push_back(parse_node_id(
        doc["leaders"][i], spec.n, "leaders[" + std::to_string(i) + "]"));
  if (static_cast<int>(spec.leaders.size()) >= spec.n)
    throw ValidationError("leaders", "leaders must be a strict subset");

  if (doc.contains("edges"))
    spec.edges = parse_edges(doc["edges"], spec.n, spec.d, "edges");

  if (doc.contains("topologies")) {
    const json& tops = doc["topologies"];
    if (!tops.is_array()) throw ValidationError("topologies", "expected array");
    for (size_t t = 0; t < tops.size(); ++t) {
      const std::string tw = "topologies[" + std::to_string(t) + "]";
      TopologySpec ts;
      ts.name = tops[t].value("name", "");
      if (!tops[t].contains("edges"))
        throw ValidationError(tw + ".edges", "missing");
      ts.edges = parse_edges(tops[t]["edges"], spec.n, spec.d, tw + ".edges");
      spec.topologies.push_back(std::move(ts));
    }
  }

  if (doc.contains("dynamics")) {
    const json& dj = doc["dynamics"];
    if (!dj.is_object()) throw ValidationError("dynamics", "expected object");
    Dynamics dyn;
    for (const char* key : {"a", "b", "k", "c"})
      if (!dj.contains(key))
        throw ValidationError(std::string("dynamics.") + key, "missing");
    dyn.a = parse_matrix(dj["a"], "dynamics.a");
    dyn.b = parse_matrix(dj["b"], "dynamics.b");
    dyn.k = parse_matrix(dj["k"], "dynamics.k");
    dyn.c = parse_matrix(dj["c"], "dynamics.c");
    try {
      validate_dynamics(dyn, spec.d);
    } catch (const std::invalid_argument& e) {
      throw ValidationError("dynamics", e.what());
    }
    spec.dynamics = std::move(dyn);
  }

  if (doc.contains("per_node_dynamics")) {
    if (!spec.dynamics)
      throw ValidationError("per_node_dynamics",
                            "shared dynamics (for k, c) required alongside");
    const json& pj = doc["per_node_dynamics"];
    if (!pj.is_array() || static_cast<int>(pj.size()) != spec.n)
      throw ValidationError("per_node_dynamics",
                            "expected one {a, b} object per node");
    HeterogeneousDynamics het;
    het.k = spec.dynamics->k;
    het.c = spec.dynamics->c;
    for (int i = 0; i < spec.n; ++i) {
      const std::string pw = "per_node_dynamics[" + std::to_string(i) + "]";
      const json& e = pj[i];
      het.a.push_back(e.contains("a") ? parse_matrix(e["a"], pw + ".a")
                                      : spec.dynamics->a);
      het.b.push_back(e.contains("b") ? parse_matrix(e["b"], pw + ".b")
                                      : spec.dynamics->b);
    }
    try {
      validate_dynamics(het, spec.n, spec.d);
    } catch (const std::invalid_argument& e) {
      throw ValidationError("per_node_dynamics", e.what());
    }
    spec.per_node = std::move(het);
  }

  if (doc.contains("laplacian_override")) {
    MatQ l = parse_matrix(doc["laplacian_override"], "laplacian_override");
    if (l.rows() != spec.n * spec.d || l.cols() != spec.n * spec.d)
      throw ValidationError("laplacian_override", "must be dn x dn");
    spec.laplacian_override = std::move(l);
  }

  // Construct graphs once so every module-level invariant is checked at
  // load time with a located message.
  try {
    if (!spec.edges.empty() || spec.topologies.empty()) spec.graph();
  } catch (const std::invalid_argument& e) {
    throw ValidationError("edges", e.what());
  }
  for (size_t t = 0; t < spec.topologies.size(); ++t) {
    try {
      spec.graph(spec.topologies[t]);
    } catch (const std::invalid_argument& e) {
      throw ValidationError("topologies[" + std::to_string(t) + "]", e.what());
    }
  }
  return spec;
}

NetworkSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str());
}

std::string serialize_spec(const NetworkSpec& spec) {
  json doc;
  doc["schema"] = kSchema;
  if (!spec.name.empty()) doc["name"] = spec.name;
  doc["n"] = spec.n;
  doc["d"] = spec.d;
  json leaders = json::array();
  for (int l : spec.leaders) leaders.push_back(l + 1);
  doc["leaders"] = std::move(leaders);
  if (!spec.edges.empty()) doc["edges"] = edges_to_json(spec.edges);
  if (!spec.topologies.empty()) {
    json tops = json::array();
    for (const TopologySpec& t : spec.topologies) {
      json jt;
      if (!t.name.empty()) jt["name"] = t.name;
      jt["edges"] = edges_to_json(t.edges);
      tops.push_back(std::move(jt));
    }
    doc["topologies"] = std::move(tops);
  }
  if (spec.dynamics) {
    json dj;
    dj["a"] = matrix_to_json(spec.dynamics->a);
    dj["b"] = matrix_to_json(spec.dynamics->b);
    dj["k"] = matrix_to_json(spec.dynamics->k);
    dj["c"] = matrix_to_json(spec.dynamics->c);
    doc["dynamics"] = std::move(dj);
  }
  if (spec.per_node) {
    json pj = json::array();
    for (int i = 0; i < spec.n; ++i) {
      json e;
      e["a"] = matrix_to_json(spec.per_node->a[i]);
      e["b"] = matrix_to_json(spec.per_node->b[i]);
      pj.push_back(std::move(e));
    }
    doc["per_node_dynamics"] = std::move(pj);
  }
  if (spec.laplacian_override)
    doc["laplacian_override"] = matrix_to_json(*spec.laplacian_override);
  return doc.dump(2) + "\n";
}

Partition parse_partition(const std::string& text, int node_count) {
  std::vector<std::vector<int>> cells;
  std::istringstream cells_in(text);
  std::string cell_text;
  while (std::getline(cells_in, cell_text, '|')) {
    std::vector<int> cell;
    std::istringstream ids_in(cell_text);
    std::string id_text;
    while (std::getline(ids_in, id_text, ',')) {
      try {
        size_t used = 0;
        const int id = std::stoi(id_text, &used);
        if (used != id_text.size() || id < 1 || id > node_count)
          throw std::invalid_argument("bad id");
        cell.push_back(id - 1);
      } catch (const std::exception&) {
        throw ValidationError("partition",
                              "bad node id '" + id_text + "' in '" + text + "'");
      }
    }
    if (cell.empty())
      throw ValidationError("partition", "empty cell in '" + text + "'");
    cells.push_back(std::move(cell));
  }
  try {
    return Partition(std::move(cells), node_count);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("partition", e.what());
  }
}

std::string format_partition(const Partition& pi) {
  std::string out;
  for (int c = 0; c < pi.cell_count(); ++c) {
    if (c) out += "|";
    const auto& cell = pi.cell(c);
    for (size_t i = 0; i < cell.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(cell[i] + 1);
    }
  }
  return out;
}

}  // namespace matnet
