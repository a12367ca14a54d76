#pragma once

#include <string>
#include <vector>

#include "r3r/config.hpp"

namespace r3r {

// exit codes shared by the CLI: 0 ok, 1 safety violation, 2 config/input
// error, 3 internal invariant abort
inline constexpr int kExitOk = 0;
inline constexpr int kExitSafety = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_dir);

int cmd_batch(const std::string& config_path, const std::vector<std::string>& overrides,
              int trials, const std::string& out_dir);

int cmd_check(const std::string& run_dir);

int cmd_export(const std::string& run_dir, const std::string& kind);

/// Writes the SVG rendering of a finished run: map, per-agent paths,
/// planning circles at the final commit anchors, and goal markers.
struct ExportAgentInfo {
    int id = -1;
    Point2 goal;
    Point2 final_anchor;
    bool has_anchor = false;
};

void write_svg(std::ostream& os, const OccupancyEnvironment& env,
               const std::vector<AgentTrace>& traces, const std::vector<ExportAgentInfo>& agents,
               double r_plan);

}  // namespace r3r
