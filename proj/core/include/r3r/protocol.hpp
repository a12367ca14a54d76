#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "r3r/validation.hpp"

namespace r3r {

enum class AgentStatus { Pending, Active, Retired };

struct AgentRecord {
    int id = -1;
    DubinsState state;  // tracked state; exact replay of the commitment
    Point2 goal;
    CommitPtr committed;
    AgentStatus status = AgentStatus::Pending;
    int iteration = -1;  // gatekeeper iteration k; join lands on 0
    bool goal_reached = false;
    double join_time = 0.0;
    double last_commit_time = 0.0;
};

/// Snapshot of the proximity graph over Active agents at one instant.
/// Edge (i, j) iff their positions are within r_comm; no self edges.
struct CommGraph {
    double t = 0.0;
    double r_comm = 0.0;
    std::vector<int> members;       // Active ids, ascending
    std::vector<Point2> positions;  // parallel to members
};

struct World {
    OccupancyEnvironment env{1, 1, 1.0};
    R3RParams params = R3RParams::from_comm_radius(16.0, 0.5);
    DubinsParams dyn;
    GatekeeperConfig gatekeeper;
    PlannerConfig planner;
    std::vector<AgentRecord> agents;  // indexed by id
    uint64_t seed = 0;
};

/// Position an agent occupies at time t: its commitment replayed for Active
/// agents, the frozen spawn state for Pending ones.
Point2 agent_position(const World& world, int id, double t);

CommGraph build_comm_graph(const World& world, double t);

/// Active neighbors of Active agent i (throws for non-Active i).
std::vector<int> neighbors_of(const CommGraph& g, int id);

struct ReplanTrigger {
    enum class Policy { Periodic, NearSwitch, Hybrid };
    Policy policy = Policy::Hybrid;
    double period = 2.0;  // seconds between periodic triggers
    double lead = 0.5;    // seconds before orbit entry for NearSwitch
};

/// Next replan instant after t for an Active agent; always > t.
double next_trigger(const AgentRecord& agent, const ReplanTrigger& trigger, double t);

/// A replan/join request placed with the arbiter.
struct ArbitrationRequest {
    int agent = -1;
    double t = 0.0;
    Point2 position;
};

/// Strict total order on requests: equal-time requests from agents that are
/// (or are about to become) neighbors get separated by eps in ascending id
/// order; distant agents may keep their shared instant.
std::vector<ArbitrationRequest> arbitration_schedule(std::vector<ArbitrationRequest> requests,
                                                     double r_comm, double v,
                                                     double eps = 1e-6);

enum class UpdateOutcome { Joined, Committed, KeptOld, JoinRejected };

const char* to_string(UpdateOutcome o);

struct UpdateRecord {
    UpdateOutcome outcome = UpdateOutcome::KeptOld;
    int n_neighbors = 0;
    double switch_time = -1.0;  // committed T_S, -1 when nothing was adopted
    double replan_wall_ms = 0.0;
    std::vector<SwitchAttempt> attempts;
};

/// One protocol event for agent i at time t: gather neighbor commitments,
/// attempt a replan, and either adopt the new commitment (joining if
/// Pending) or keep the old one. Caller must hold the arbitration order;
/// no other agent's commitment is read outside the neighbor set or mutated.
UpdateRecord update_state(World& world, int id, double t);

}  // namespace r3r
