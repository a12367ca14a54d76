#pragma once

#include <functional>
#include <string>
#include <vector>

#include "r3r/protocol.hpp"

namespace r3r {

struct SimConfig {
    double sim_dt = 0.02;
    double oracle_dt = 0.02;  // <= sim_dt; the oracle re-checks at this stride
    ReplanTrigger trigger;
    GatekeeperConfig gatekeeper;
    PlannerConfig planner;
    double goal_tolerance = 1.0;
    double deadlock_window = 30.0;
    double join_retry_base = 0.5;
    double join_retry_cap = 4.0;
    bool log_wall_times = false;  // keep wall clocks out of the event log by default

    /// Leave events injected into the schedule: (time, agent id).
    std::vector<std::pair<double, int>> leaves;
};

struct Metrics {
    int safety_violations = 0;      // distinct (pair, interval) oracle events
    double success_fraction = 0.0;  // agents within goal tolerance at the end
    double avg_neighbors_per_replan = 0.0;
    int max_neighbors = 0;
    double mean_replan_ms = 0.0;
    double replan_failure_rate = 0.0;
    int deadlocked_agents = 0;
};

/// One event-log line: `t event agent outcome T_S n_neighbors replan_ms`.
struct SimEventRec {
    double t = 0.0;
    std::string kind;     // join | replan | leave
    int agent = -1;
    std::string outcome;  // Joined | Committed | KeptOld | JoinRejected | Retired
    double switch_time = -1.0;
    int n_neighbors = 0;
    double replan_ms = 0.0;
};

void write_event_line(std::ostream& os, const SimEventRec& ev);

/// One validity-attempt line: `t agent T_S outcome [failed_condition]`.
struct AttemptRec {
    double t = 0.0;
    int agent = -1;
    double switch_time = 0.0;
    bool valid = false;
    std::string failed_condition;
};

void write_attempt_line(std::ostream& os, const AttemptRec& a);

struct AgentTrace {
    int id = -1;
    std::vector<TraceSample> samples;
};

struct RunResult {
    Metrics metrics;
    std::vector<SimEventRec> events;
    std::vector<AttemptRec> attempts;
    std::vector<AgentTrace> traces;
    World world;  // final protocol state, for inspection
    double end_time = 0.0;
};

/// Invoked after every processed protocol event; used by invariance fuzzing.
using PostEventHook = std::function<void(const World&, const SimEventRec&)>;

/// Deterministic closed-loop run: agents replay their commitments exactly,
/// protocol events interleave on an arbitrated serial schedule, and the
/// safety oracle re-verifies the recorded traces at the end.
RunResult run(const Scenario& scenario, const SimConfig& cfg, PostEventHook hook = nullptr);

/// An oracle finding: either an inter-agent interval below delta or a
/// safe-set breach. agent_b is -1 for static violations.
struct OracleViolation {
    double t_begin = 0.0;
    double t_end = 0.0;
    int agent_a = -1;
    int agent_b = -1;
    double worst = 0.0;  // smallest distance seen (pairs), unused for static
};

/// Independent re-verification of the recorded traces: pairwise distances
/// >= delta and every position inside the safe set, at every oracle step.
/// Shares no logic with the validation path.
std::vector<OracleViolation> oracle_check(const std::vector<AgentTrace>& traces,
                                          const Scenario& scenario, double oracle_dt);

struct DensityRow {
    double side = 0.0;
    double density = 0.0;  // agents per square meter
    int trial = 0;
    double mean_replan_ms = 0.0;
    double failure_rate = 0.0;
};

/// Fixes n agents, varies the arena side, randomizes starts/goals per trial.
std::vector<DensityRow> density_sweep(int n, const std::vector<double>& side_lengths, int trials,
                                      uint64_t base_seed, const R3RParams& params,
                                      const DubinsParams& dyn, const SimConfig& cfg,
                                      double sim_duration = 40.0);

}  // namespace r3r
