#pragma once

#include <span>
#include <string>
#include <vector>

#include "matnet/report.hpp"

namespace matnet {

/// Built-in regression examples with frozen expected outcomes. Where the
/// source material leaves a topology or edge sign ambiguous, `notes` records
/// the inference that reproduces the published verdicts.
struct CorpusExample {
  enum class Kind { fixed, switching, heterogeneous, union_graphs, observability };

  std::string id;
  std::string title;
  std::string notes;
  std::string spec_json;
  Kind kind = Kind::fixed;

  int ambient_dim = 0;
  int expected_dim = 0;           // ctrb / switched / dual dimension
  bool expected_positive = false; // controllable resp. observable
  std::optional<int> expected_union_dim;
  std::optional<bool> expected_union_controllable;
  std::optional<std::string> expected_ep;     // partition literal
  std::optional<int> expected_bound;
};

std::span<const CorpusExample> corpus();

struct CorpusOutcome {
  std::string id;
  bool passed = false;
  std::string detail;  // human-oriented, one line
};

/// Checks one example (possibly with tampered expectations, for harness
/// self-tests) against the selected backend.
CorpusOutcome run_example(const CorpusExample& example, Backend backend);

std::vector<CorpusOutcome> run_corpus(Backend backend);

}  // namespace matnet
