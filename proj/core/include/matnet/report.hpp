#pragma once

#include <optional>
#include <string>

#include "matnet/spec_io.hpp"
#include "matnet/system.hpp"

namespace matnet {

enum class Backend { exact, floating };

std::string backend_name(Backend b);
/// Parses "exact" / "float"; throws ValidationError otherwise.
Backend backend_from_name(const std::string& name);

enum class CtrbMode { fixed, heterogeneous, switching, union_graphs };
CtrbMode ctrb_mode_from_name(const std::string& name);

struct RunOptions {
  Backend backend = Backend::exact;
  UnionAFactor union_a_factor = UnionAFactor::t;
  std::optional<std::string> partition_text;  // ep: verify this partition
  bool include_timing = false;  // timing makes reports non-reproducible
};

/// Exit codes: 0 success, 2 validation error, 3 corpus regression. Analysis
/// verdicts are data, never failures.
struct CommandResult {
  std::string report_json;
  std::string human_summary;
  std::optional<std::string> dot;  // ep: quotient graph rendering
  int exit_code = 0;
};

CommandResult cmd_laplacian(const NetworkSpec& spec, const RunOptions& opts);
CommandResult cmd_ep(const NetworkSpec& spec, const RunOptions& opts);
CommandResult cmd_ctrb(const NetworkSpec& spec, CtrbMode mode,
                       const RunOptions& opts);
CommandResult cmd_obsv(const NetworkSpec& spec, const RunOptions& opts);
CommandResult cmd_corpus(const RunOptions& opts);

}  // namespace matnet
