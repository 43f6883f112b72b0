#pragma once

#include <string>

#include "matnet/graph.hpp"
#include "matnet/partition.hpp"

namespace matnet {

/// Graphviz rendering of the quotient graph of `g` over the equitable
/// partition `pi`: one node per cell, edges labeled with the per-class
/// magnitude sums d(V_i, V_j).
std::string quotient_dot(const Graph& g, const Partition& pi);

}  // namespace matnet
