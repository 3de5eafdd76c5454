#pragma once

#include "gowers/approx.hpp"

namespace gowers {

struct RunOptions {
  std::optional<std::uint64_t> budget_nodes;
};

struct RunOutcome {
  json report;
  int exit_code = 0;
};

enum ExitCode { kExitOk = 0, kExitInternal = 1, kExitInvalid = 2, kExitExhausted = 3, kExitUnverified = 4 };

json read_json_file(const std::string& path);

// Static checks: required fields, known stage ops and reduction names, and that each
// strategy-consuming stage receives the game and owner it expects.
void validate_scenario(const json& scenario);

// Runs the pipeline. Never throws for scenario content: errors become report entries and
// the exit code (2 validation, 3 exhaustion, 4 verification failure).
RunOutcome run_scenario(const json& scenario, const RunOptions& options = {});

int exit_code_for(const Error& e);

// "json" (indented, deterministic) or "table" (stage, result, nodes, exhausted, verified-fraction).
std::string render_report(const json& report, const std::string& format);

// "all", "even" (grid points with all coordinates even) or an explicit id list.
std::vector<PointId> dense_points(const SpaceInstance& space, const json& rule);

}  // namespace gowers
