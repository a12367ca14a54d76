#include "r3r/validation.hpp"

#include <algorithm>
#include <cmath>

namespace r3r {

const char* to_string(ValidityCondition c) {
    switch (c) {
        case ValidityCondition::SafeSet: return "SafeSet";
        case ValidityCondition::BackupReach: return "BackupReach";
        case ValidityCondition::PlanBound: return "PlanBound";
        case ValidityCondition::NeighborCollision: return "NeighborCollision";
    }
    return "?";
}

namespace {
constexpr double kSpliceTol = 1e-6;

ValidityReport fail(ValidityCondition c, ValidityWitness w) {
    ValidityReport r;
    r.valid = false;
    r.failed_condition = c;
    r.witness = w;
    return r;
}
}  // namespace

ValidityReport is_valid(const CandidateTrajectory& cand, const std::vector<CommitPtr>& neighbors,
                        const OccupancyEnvironment& env, const R3RParams& params,
                        const GatekeeperConfig& cfg) {
    const SampledTrajectory& traj = cand.base;
    const LoiterOrbit& orbit = *traj.tail;
    double t0 = traj.t0;
    double prefix_end = traj.end_time();

    // 1) safe set: sampled prefix with margin, tail via its exact orbit ball
    for (double t = t0;; t += cfg.check_dt) {
        t = std::min(t, prefix_end);
        Point2 pos = sample_at(traj, t).position();
        if (!env.in_safe_set(pos, cfg.margin)) {
            return fail(ValidityCondition::SafeSet, {t, pos, -1});
        }
        if (t >= prefix_end) break;
    }
    if (!env.in_safe_set(orbit.center, orbit.radius)) {
        return fail(ValidityCondition::SafeSet, {prefix_end, orbit.center, -1});
    }

    // 2) the candidate actually reaches its backup set (splice continuity)
    DubinsState on_orbit = orbit_state_at(orbit, orbit.entry_time);
    const DubinsState& last = traj.states.back();
    if (dist_point_point(on_orbit.position(), last.position()) > kSpliceTol ||
        std::abs(wrap_angle(on_orbit.theta - last.theta)) > kSpliceTol) {
        return fail(ValidityCondition::BackupReach, {prefix_end, last.position(), -1});
    }

    // 3) plan-radius bound, anchored at the candidate start
    for (size_t i = 0; i < traj.states.size(); ++i) {
        Point2 pos = traj.states[i].position();
        if (dist_point_point(pos, cand.anchor) > params.r_plan() - cfg.margin) {
            return fail(ValidityCondition::PlanBound,
                        {t0 + static_cast<double>(i) * traj.dt, pos, -1});
        }
    }
    double orbit_reach = dist_point_point(cand.anchor, orbit.center) + orbit.radius;
    if (orbit_reach > params.r_plan()) {
        return fail(ValidityCondition::PlanBound, {prefix_end, orbit.center, -1});
    }

    // 4) separation from every neighboring commitment, over all future time
    for (const CommitPtr& nb : neighbors) {
        SeparationDetail sep = min_separation_detail(traj, nb->cand.base, t0, cfg.check_dt);
        if (sep.lower_bound < params.delta()) {
            Point2 where = sample_at(traj, sep.argmin_time).position();
            return fail(ValidityCondition::NeighborCollision,
                        {sep.argmin_time, where, nb->owner});
        }
    }
    return {};
}

std::vector<size_t> switch_grid_indices(size_t n_steps, int grid) {
    if (grid < 2) throw std::invalid_argument("switch_grid_indices: grid must be >= 2");
    std::vector<size_t> out;
    for (int k = 0; k < grid; ++k) {
        double frac = 1.0 - static_cast<double>(k) / static_cast<double>(grid - 1);
        auto idx = static_cast<size_t>(std::llround(frac * static_cast<double>(n_steps)));
        if (out.empty() || out.back() != idx) out.push_back(idx);
    }
    if (out.back() != 0) out.push_back(0);
    return out;
}

ReplanResult attempt_replan(const DubinsState& state, const Point2& goal, double t_now,
                            const std::vector<CommitPtr>& neighbors,
                            const OccupancyEnvironment& env, const R3RParams& params,
                            const GatekeeperConfig& gk, const PlannerConfig& planner_cfg,
                            const DubinsParams& dyn) {
    ReplanResult out;

    NeighborTrajectories nb_trajs;
    nb_trajs.reserve(neighbors.size());
    for (const CommitPtr& nb : neighbors) nb_trajs.push_back(&nb->cand.base);

    PlannerConfig pcfg = planner_cfg;
    pcfg.horizon = gk.horizon;
    out.nominal = plan_nominal(state, goal, env, nb_trajs, pcfg, dyn, params.delta(), t_now);

    const SampledTrajectory& nominal = out.nominal.trajectory;
    for (size_t idx : switch_grid_indices(nominal.controls.size(), gk.switch_grid)) {
        double t_s = static_cast<double>(idx) * nominal.dt;
        LoiterDirection dir = choose_loiter_direction(nominal.states[idx],
                                                      nominal.states.front().position(),
                                                      params.r_plan(), dyn, &env);
        CandidateTrajectory cand = compose_candidate(nominal, t_s, dyn, dir);
        ValidityReport report = is_valid(cand, neighbors, env, params, gk);
        out.attempts.push_back({t_s, report});
        if (report.valid) {
            out.success = true;
            out.candidate = std::move(cand);
            out.certificate.certified_at = t_now;
            out.certificate.switch_time = t_s;
            for (const CommitPtr& nb : neighbors) {
                out.certificate.neighbor_ids.push_back(nb->owner);
            }
            out.certificate.report = report;
            break;
        }
    }
    return out;
}

}  // namespace r3r
