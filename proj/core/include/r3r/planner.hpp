#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "r3r/dynamics.hpp"
#include "r3r/environment.hpp"
#include "r3r/trajectory.hpp"

namespace r3r {

struct PlannerConfig {
    double horizon = 4.0;  // T_H, seconds
    int max_iterations = 2000;
    double goal_bias = 0.1;
    double step_arc_length = 1.0;  // meters
    double rewire_radius = 2.0;    // meters
    uint64_t rng_seed = 0;
    double goal_tolerance = 0.5;   // node counts as reaching the goal
    double traj_dt = 0.05;         // output sample spacing
    double check_ds = 0.2;         // collision-check spacing along arcs
    double neighbor_margin = 0.1;  // on top of delta when dodging commits
};

struct NominalResult {
    SampledTrajectory trajectory;  // duration exactly horizon, no tail
    bool reached_goal = false;
    double cost = 0.0;             // arc length of the selected branch, meters
};

/// Committed trajectories of current neighbors, observed by the planner.
using NeighborTrajectories = std::vector<const SampledTrajectory*>;

/// Best single constant-omega arc (|omega| <= omega_max, length <= max_arc)
/// toward a target point, judged by end-point distance.
struct SteerResult {
    double omega = 0.0;
    double length = 0.0;  // meters
    DubinsState end;
};

SteerResult steer_dubins(const DubinsState& from, const Point2& to, double max_arc,
                         const DubinsParams& p);

/// All samples in free space and, at their absolute times (t_offset +
/// rel_times[i]), at least delta + margin away from every neighbor position.
bool edge_collision_free(std::span<const DubinsState> samples, std::span<const double> rel_times,
                         const OccupancyEnvironment& env, const NeighborTrajectories& neighbors,
                         double t_offset, double delta, double margin);

/// Optional sinks: tree dump, one line per node `parent_idx x y theta cost`,
/// and the full history of node-cost assignments (inserts and rewires).
struct PlannerDebug {
    std::string* tree_dump = nullptr;
    std::vector<std::pair<int, double>>* cost_updates = nullptr;
};

/// Dubins-primitive RRT* toward `goal` over exactly cfg.horizon seconds,
/// best-effort avoiding the environment and time-indexed neighbor commits.
/// Never returns dynamically infeasible motion; a goal-orbit docking branch is
/// preferred, otherwise the lowest-cost branch padded by max-turn arcs.
NominalResult plan_nominal(const DubinsState& start, const Point2& goal,
                           const OccupancyEnvironment& env, const NeighborTrajectories& neighbors,
                           const PlannerConfig& cfg, const DubinsParams& p, double delta,
                           double t0 = 0.0, PlannerDebug debug = {});

}  // namespace r3r
