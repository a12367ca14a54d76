#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "r3r/simulator.hpp"

namespace r3r {

/// Everything one run needs, parsed from flat `key = value` text with `#`
/// comments and dotted section prefixes. Unknown keys are hard errors; every
/// field has a documented default.
struct RunConfig {
    // scenario
    std::string scenario_kind = "swap";  // swap | city | mapfile | density
    int n_agents = 8;
    uint64_t seed = 1;
    double duration = 0.0;     // seconds; 0 picks a kind-appropriate value
    double swap_radius = 0.0;  // meters; 0 derives from the spawn separation
    double city_side = 100.0;
    std::string map_path;

    // radii
    double delta = 0.5;
    double r_comm = 16.0;

    DubinsParams dyn{1.0, 2.0};
    PlannerConfig planner;
    GatekeeperConfig gatekeeper;

    // simulation
    double sim_dt = 0.02;
    double oracle_dt = 0.0;  // 0 = sim_dt
    std::string trigger = "hybrid";  // periodic | nearswitch | hybrid
    double trigger_period = 2.0;
    double trigger_lead = 0.5;
    double goal_tolerance = 1.0;
    double deadlock_window = 30.0;
    bool log_wall_times = false;

    // density sweep (scenario.kind = density)
    std::vector<double> sweep_sides = {40.0, 56.0, 80.0};
    int sweep_trials = 20;

    // batch
    std::vector<uint64_t> batch_seeds;  // empty = derive seed+i

    R3RParams params() const { return R3RParams::from_comm_radius(r_comm, delta); }
    SimConfig sim_config() const;
    Scenario build_scenario() const;
};

RunConfig parse_config(const std::string& text);
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

/// Canonical dump; parsing it back reproduces the identical configuration.
std::string dump_config(const RunConfig& cfg);

}  // namespace r3r
