#include "matnet/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace matnet {

Partition::Partition(std::vector<std::vector<int>> cells, int node_count)
    : n_(node_count), cells_(std::move(cells)) {
  if (n_ < 1) throw std::invalid_argument("Partition: empty node set");
  cell_index_.assign(n_, -1);
  for (auto& cell : cells_) {
    if (cell.empty()) throw std::invalid_argument("Partition: empty cell");
    std::sort(cell.begin(), cell.end());
    for (int v : cell) {
      if (v < 0 || v >= n_)
        throw std::invalid_argument("Partition: node id out of range: " +
                                    std::to_string(v + 1));
      if (cell_index_[v] != -1)
        throw std::invalid_argument("Partition: node in two cells: " +
                                    std::to_string(v + 1));
      cell_index_[v] = 0;  // provisional; rebuilt after sorting cells
    }
  }
  for (int v = 0; v < n_; ++v)
    if (cell_index_[v] == -1)
      throw std::invalid_argument("Partition: node not covered: " +
                                  std::to_string(v + 1));
  std::sort(cells_.begin(), cells_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (int c = 0; c < cell_count(); ++c)
    for (int v : cells_[c]) cell_index_[v] = c;
}

Partition Partition::singletons(int node_count) {
  std::vector<std::vector<int>> cells(node_count);
  for (int i = 0; i < node_count; ++i) cells[i] = {i};
  return Partition(std::move(cells), node_count);
}

Partition Partition::single_cell(int node_count) {
  std::vector<int> all(node_count);
  std::iota(all.begin(), all.end(), 0);
  return Partition({all}, node_count);
}

bool Partition::has_nontrivial_cell() const {
  return std::any_of(cells_.begin(), cells_.end(),
                     [](const auto& c) { return c.size() > 1; });
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.node_count() != n_) return false;
  for (const auto& cell : cells_) {
    const int target = coarser.cell_of(cell.front());
    for (int v : cell)
      if (coarser.cell_of(v) != target) return false;
  }
  return true;
}

CharacteristicMatrix characteristic_matrix(const Partition& pi, int d) {
  if (d < 1) throw std::invalid_argument("characteristic_matrix: d < 1");
  const int n = pi.node_count(), k = pi.cell_count();
  MatQ p = MatQ::zero(d * n, d * k);
  const MatQ id = MatQ::identity(d);
  for (int node = 0; node < n; ++node)
    p.set_block(d * node, d * pi.cell_of(node), id);
  return CharacteristicMatrix{std::move(p), pi, d};
}

MatQ cell_sum(const Graph& g, int node, const std::vector<int>& cell,
              EdgeSign sign_class) {
  MatQ sum = MatQ::zero(g.state_dim(), g.state_dim());
  for (int t : cell) {
    if (t == node) continue;
    const WeightedEdge* e = g.find_edge(node, t);
    if (!e || e->sign != sign_class) continue;
    if (sign_class == EdgeSign::positive)
      sum += e->weight;
    else
      sum -= e->weight;  // signed block of a negative edge
  }
  return sum;
}

namespace {

bool nearly_equal(const MatQ& a, const MatQ& b, double tolerance) {
  double max_entry = 0.0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      max_entry = std::max({max_entry, std::fabs(a(r, c).to_double()),
                            std::fabs(b(r, c).to_double())});
  const double bound = tolerance * (1.0 + max_entry);
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      if (std::fabs(a(r, c).to_double() - b(r, c).to_double()) > bound)
        return false;
  return true;
}

EpWitness is_equitable_impl(const Graph& g, const Partition& pi,
                            std::optional<double> tolerance) {
  if (pi.node_count() != g.node_count())
    throw std::invalid_argument("is_equitable: node count mismatch");
  for (int a = 0; a < pi.cell_count(); ++a) {
    const auto& cell_a = pi.cell(a);
    if (cell_a.size() < 2) continue;
    for (int b = 0; b < pi.cell_count(); ++b) {
      const auto& cell_b = pi.cell(b);
      for (EdgeSign sign : {EdgeSign::positive, EdgeSign::negative}) {
        const MatQ ref = cell_sum(g, cell_a[0], cell_b, sign);
        for (size_t s = 1; s < cell_a.size(); ++s) {
          const MatQ other = cell_sum(g, cell_a[s], cell_b, sign);
          const bool equal = tolerance ? nearly_equal(ref, other, *tolerance)
                                       : ref == other;
          if (!equal)
            return EpWitness{
                false, EpViolation{a, b, cell_a[0], cell_a[s], sign, ref,
                                   other}};
        }
      }
    }
  }
  return EpWitness{true, std::nullopt};
}

}  // namespace

EpWitness is_equitable(const Graph& g, const Partition& pi) {
  return is_equitable_impl(g, pi, std::nullopt);
}

EpWitness is_equitable(const Graph& g, const Partition& pi, double tolerance) {
  return is_equitable_impl(g, pi, tolerance);
}

Partition leader_init(const Graph& g) {
  std::vector<std::vector<int>> cells;
  std::vector<int> followers;
  for (int v = 0; v < g.node_count(); ++v) {
    if (g.is_leader(v))
      cells.push_back({v});
    else
      followers.push_back(v);
  }
  if (!followers.empty()) cells.push_back(std::move(followers));
  return Partition(std::move(cells), g.node_count());
}

Partition coarsest_ep(const Graph& g, const Partition& init) {
  if (init.node_count() != g.node_count())
    throw std::invalid_argument("coarsest_ep: node count mismatch");
  Partition current = init;
  for (int round = 0; round <= g.node_count(); ++round) {
    // Signature of a node: serialized (positive, negative) sums toward every
    // current cell. Nodes split exactly when signatures differ.
    std::vector<std::vector<int>> next;
    bool changed = false;
    for (const auto& cell : current.cells()) {
      if (cell.size() == 1) {
        next.push_back(cell);
        continue;
      }
      std::map<std::string, std::vector<int>> groups;
      for (int node : cell) {
        std::ostringstream sig;
        for (const auto& target : current.cells()) {
          sig << to_string(cell_sum(g, node, target, EdgeSign::positive))
              << '#'
              << to_string(cell_sum(g, node, target, EdgeSign::negative))
              << '|';
        }
        groups[sig.str()].push_back(node);
      }
      if (groups.size() > 1) changed = true;
      for (auto& [unused, members] : groups) next.push_back(std::move(members));
    }
    if (!changed) return current;
    current = Partition(std::move(next), g.node_count());
  }
  return current;  // unreachable: at most n-1 strict refinements possible
}

MatQ quotient_laplacian(const Graph& g, const Partition& pi) {
  if (!is_equitable(g, pi).equitable)
    throw std::invalid_argument("quotient_laplacian: partition not equitable");
  const int d = g.state_dim(), k = pi.cell_count();
  MatQ q = MatQ::zero(d * k, d * k);
  for (int i = 0; i < k; ++i) {
    const int rep = pi.cell(i)[0];
    for (int j = 0; j < k; ++j) {
      MatQ signed_sum = cell_sum(g, rep, pi.cell(j), EdgeSign::positive) +
                        cell_sum(g, rep, pi.cell(j), EdgeSign::negative);
      if (i == j)
        q.set_block(d * i, d * i, g.degree(rep) - signed_sum);
      else
        q.set_block(d * i, d * j, -signed_sum);
    }
  }
  return q;
}

Partition join(const Partition& a, const Partition& b) {
  if (a.node_count() != b.node_count())
    throw std::invalid_argument("join: node count mismatch");
  const int n = a.node_count();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int x, int y) { parent[find(x)] = find(y); };
  for (const Partition* p : {&a, &b})
    for (const auto& cell : p->cells())
      for (size_t i = 1; i < cell.size(); ++i) unite(cell[0], cell[i]);
  std::map<int, std::vector<int>> groups;
  for (int v = 0; v < n; ++v) groups[find(v)].push_back(v);
  std::vector<std::vector<int>> cells;
  for (auto& [unused, members] : groups) cells.push_back(std::move(members));
  return Partition(std::move(cells), n);
}

}  // namespace matnet
