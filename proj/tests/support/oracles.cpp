#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace r3r::testing {

namespace {
double point_gap(const DubinsState& a, const DubinsState& b) {
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}
}  // namespace

double brute_min_separation(const SampledTrajectory& a, const SampledTrajectory& b, double t_from,
                            double t_to, double dt) {
    double best = std::numeric_limits<double>::infinity();
    for (double t = t_from; t <= t_to + 1e-12; t += dt) {
        best = std::min(best, point_gap(sample_at(a, t), sample_at(b, t)));
    }
    return best;
}

double brute_max_displacement(const SampledTrajectory& traj, const Point2& anchor, double dt,
                              int tail_periods) {
    double horizon = traj.duration();
    if (traj.tail) horizon += tail_periods * traj.tail->period();
    double worst = 0.0;
    for (double t = 0.0; t <= horizon + 1e-12; t += dt) {
        DubinsState s = sample_at(traj, traj.t0 + t);
        double dx = s.x - anchor.x;
        double dy = s.y - anchor.y;
        worst = std::max(worst, std::sqrt(dx * dx + dy * dy));
    }
    return worst;
}

BoundedSample random_bounded_trajectory(std::mt19937_64& rng, const DubinsParams& dyn, double t0,
                                        double max_prefix_seconds) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> nseg(1, 4);
    std::vector<ControlSegment> sched;
    double total = 0.0;
    int segments = nseg(rng);
    for (int i = 0; i < segments; ++i) {
        double omega = (2.0 * u01(rng) - 1.0) * dyn.omega_max;
        double dur = u01(rng) * max_prefix_seconds / segments;
        sched.push_back({omega, dur});
        total += dur;
    }
    if (sched.empty() || total < 0.05) {
        sched = {{0.0, 0.1}};
        total = 0.1;
    }

    BoundedSample out;
    out.traj = propagate({0.0, 0.0, u01(rng) * 6.28 - 3.14}, sched, 0.05, total, dyn, t0);
    LoiterDirection dir =
        u01(rng) < 0.5 ? LoiterDirection::Counterclockwise : LoiterDirection::Clockwise;
    out.traj.tail = make_loiter(out.traj.states.back(), dir, dyn, out.traj.end_time());

    Point2 anchor = out.traj.states.front().position();
    double sampled = brute_max_displacement(out.traj, anchor, 0.01, 0);
    double orbit_reach = dist_point_point(anchor, out.traj.tail->center) + out.traj.tail->radius;
    out.tight_radius = std::max(sampled, orbit_reach);
    return out;
}

DenseValidity dense_validity_check(const CandidateTrajectory& cand,
                                   const std::vector<CommitPtr>& neighbors,
                                   const OccupancyEnvironment& env, const R3RParams& params,
                                   double fine_dt, int tail_periods) {
    DenseValidity out;
    const SampledTrajectory& traj = cand.base;
    const LoiterOrbit& orbit = *traj.tail;
    double prefix = traj.duration();
    double horizon = prefix + tail_periods * orbit.period();

    for (double t = 0.0; t <= horizon + 1e-12; t += fine_dt) {
        DubinsState s = sample_at(traj, traj.t0 + t);
        if (!env.in_safe_set(s.position(), 0.0)) out.safe_set = false;
        double dx = s.x - cand.anchor.x;
        double dy = s.y - cand.anchor.y;
        if (std::sqrt(dx * dx + dy * dy) > params.r_plan() + 1e-9) out.plan_bound = false;
    }

    DubinsState splice = orbit_state_at(orbit, orbit.entry_time);
    if (point_gap(splice, traj.states.back()) > 1e-6) out.backup_reach = false;

    for (const CommitPtr& nb : neighbors) {
        double nb_horizon = std::max(horizon, nb->cand.base.end_time() - traj.t0 +
                                                  tail_periods * nb->cand.base.tail->period());
        double sep = brute_min_separation(traj, nb->cand.base, traj.t0, traj.t0 + nb_horizon,
                                          fine_dt);
        if (sep < params.delta() - 1e-9) out.neighbor_clear = false;
    }
    return out;
}

CommitPtr make_loiter_commit(int owner, const DubinsState& entry, LoiterDirection dir,
                             const DubinsParams& dyn, double t0) {
    auto commit = std::make_shared<CommittedTrajectory>();
    commit->cand.base.t0 = t0;
    commit->cand.base.states = {entry};
    commit->cand.base.tail = make_loiter(entry, dir, dyn, t0);
    commit->cand.anchor = entry.position();
    commit->cand.anchor_time = t0;
    commit->committed_at = t0;
    commit->owner = owner;
    return commit;
}

std::optional<double> exhaustive_max_valid_switch(const SampledTrajectory& nominal,
                                                  const std::vector<CommitPtr>& neighbors,
                                                  const OccupancyEnvironment& env,
                                                  const R3RParams& params,
                                                  const GatekeeperConfig& gk,
                                                  const DubinsParams& dyn) {
    std::optional<double> best;
    for (size_t idx : switch_grid_indices(nominal.controls.size(), gk.switch_grid)) {
        double t_s = static_cast<double>(idx) * nominal.dt;
        LoiterDirection dir = choose_loiter_direction(
            nominal.states[idx], nominal.states.front().position(), params.r_plan(), dyn, &env);
        CandidateTrajectory cand = compose_candidate(nominal, t_s, dyn, dir);
        if (is_valid(cand, neighbors, env, params, gk).valid) {
            if (!best || t_s > *best) best = t_s;
        }
    }
    return best;
}

}  // namespace r3r::testing
