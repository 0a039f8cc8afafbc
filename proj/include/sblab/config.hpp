#pragma once

#include <span>
#include <string>
#include <vector>

#include "sblab/limit_harness.hpp"
#include "sblab/solver.hpp"

namespace sblab {

/// `key = value` text. Blank lines and '#' comments are skipped. Unknown keys,
/// bad values and violated invariants are errors naming the key and line.
/// Overrides are "key=value" strings applied after the file.

SimulationConfig parse_simulation_config(const std::string& path,
                                         std::span<const std::string> overrides = {});
SweepPlan parse_sweep_plan(const std::string& path, std::span<const std::string> overrides = {});

/// Parse from already-loaded text (path used only in error messages).
SimulationConfig parse_simulation_config_text(const std::string& text,
                                              std::span<const std::string> overrides,
                                              const std::string& path = "<config>");
SweepPlan parse_sweep_plan_text(const std::string& text, std::span<const std::string> overrides,
                                const std::string& path = "<config>");

/// Config echo in file format (used for provenance headers and report echoes).
std::string echo_config(const SimulationConfig& config);
std::string echo_plan(const SweepPlan& plan);

}  // namespace sblab
