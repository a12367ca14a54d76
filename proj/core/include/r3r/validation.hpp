#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "r3r/environment.hpp"
#include "r3r/planner.hpp"
#include "r3r/trajectory.hpp"

namespace r3r {

enum class ValidityCondition { SafeSet, BackupReach, PlanBound, NeighborCollision };

const char* to_string(ValidityCondition c);

struct ValidityWitness {
    double t = 0.0;
    Point2 position;
    int neighbor_id = -1;  // only for NeighborCollision
};

struct ValidityReport {
    bool valid = true;
    std::optional<ValidityCondition> failed_condition;
    std::optional<ValidityWitness> witness;
};

struct GatekeeperConfig {
    double horizon = 4.0;   // T_H, seconds
    int switch_grid = 21;   // >= 2, always includes T_S = horizon and T_S = 0
    double check_dt = 0.05;
    double margin = 0.05;   // meters, covers inter-sample excursions
};

/// What was certified, against whom, and how it came out.
struct ValidityCertificate {
    double certified_at = 0.0;
    double switch_time = 0.0;  // offset from the candidate start
    std::vector<int> neighbor_ids;
    ValidityReport report;
};

/// An adopted candidate. Immutable once created; replacement is whole-object,
/// so these are shared as pointers-to-const. The neighbor snapshot keeps the
/// exact trajectories the certificate was checked against.
struct CommittedTrajectory {
    CandidateTrajectory cand;
    double committed_at = 0.0;
    int owner = -1;
    ValidityCertificate certificate;
    std::vector<std::shared_ptr<const CommittedTrajectory>> neighbor_snapshot;
};

using CommitPtr = std::shared_ptr<const CommittedTrajectory>;

/// The four validity conditions, checked in order; the first failure is
/// reported with a witness. Failures are data, not errors.
ValidityReport is_valid(const CandidateTrajectory& cand, const std::vector<CommitPtr>& neighbors,
                        const OccupancyEnvironment& env, const R3RParams& params,
                        const GatekeeperConfig& cfg);

/// Switch-time sweep indices on the nominal's sample grid, descending from
/// the full horizon to zero, both endpoints included.
std::vector<size_t> switch_grid_indices(size_t n_steps, int grid);

struct SwitchAttempt {
    double switch_time;
    ValidityReport report;
};

struct ReplanResult {
    bool success = false;
    std::optional<CandidateTrajectory> candidate;
    ValidityCertificate certificate;  // for the accepted switch time
    NominalResult nominal;
    std::vector<SwitchAttempt> attempts;
};

/// One nominal plan, then candidates at descending switch times; the first
/// valid one (the maximal valid switch time on the grid) wins. Mutates
/// nothing; on failure the caller keeps its old commitment.
ReplanResult attempt_replan(const DubinsState& state, const Point2& goal, double t_now,
                            const std::vector<CommitPtr>& neighbors,
                            const OccupancyEnvironment& env, const R3RParams& params,
                            const GatekeeperConfig& gk, const PlannerConfig& planner_cfg,
                            const DubinsParams& dyn);

}  // namespace r3r
