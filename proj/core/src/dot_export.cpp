#include "matnet/dot_export.hpp"

#include <sstream>
#include <stdexcept>

namespace matnet {

namespace {

MatQ magnitude_sum(const Graph& g, int rep, const std::vector<int>& cell,
                   EdgeSign sign_class) {
  MatQ sum = MatQ::zero(g.state_dim(), g.state_dim());
  for (int t : cell) {
    if (t == rep) continue;
    const WeightedEdge* e = g.find_edge(rep, t);
    if (e && e->sign == sign_class) sum += e->weight;
  }
  return sum;
}

}  // namespace

std::string quotient_dot(const Graph& g, const Partition& pi) {
  if (!is_equitable(g, pi).equitable)
    throw std::invalid_argument("quotient_dot: partition not equitable");
  std::ostringstream out;
  out << "graph quotient {\n";
  out << "  node [shape=box];\n";
  for (int c = 0; c < pi.cell_count(); ++c) {
    out << "  V" << c + 1 << " [label=\"V" << c + 1 << " = {";
    const auto& cell = pi.cell(c);
    for (size_t i = 0; i < cell.size(); ++i) {
      if (i) out << ",";
      out << cell[i] + 1;
    }
    out << "}\"];\n";
  }
  for (int a = 0; a < pi.cell_count(); ++a) {
    const int rep = pi.cell(a)[0];
    for (int b = a; b < pi.cell_count(); ++b) {
      // Within-cell structure shows as a self-edge on the quotient node.
      for (EdgeSign sign : {EdgeSign::positive, EdgeSign::negative}) {
        const MatQ sum = magnitude_sum(g, rep, pi.cell(b), sign);
        if (sum.is_zero()) continue;
        out << "  V" << a + 1 << " -- V" << b + 1 << " [label=\""
            << (sign == EdgeSign::positive ? "+" : "-") << to_string(sum)
            << "\"";
        if (sign == EdgeSign::negative) out << " style=dashed";
        out << "];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace matnet
