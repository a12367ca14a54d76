#include "r3r/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

namespace r3r {

void write_event_line(std::ostream& os, const SimEventRec& ev) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.6f %s %d %s %.3f %d %.3f\n", ev.t, ev.kind.c_str(),
                  ev.agent, ev.outcome.c_str(), ev.switch_time, ev.n_neighbors, ev.replan_ms);
    os << buf;
}

void write_attempt_line(std::ostream& os, const AttemptRec& a) {
    char buf[192];
    if (a.valid) {
        std::snprintf(buf, sizeof(buf), "%.6f %d %.3f valid\n", a.t, a.agent, a.switch_time);
    } else {
        std::snprintf(buf, sizeof(buf), "%.6f %d %.3f invalid %s\n", a.t, a.agent, a.switch_time,
                      a.failed_condition.c_str());
    }
    os << buf;
}

namespace {

enum class EvKind { Join, Replan, Leave };

struct Ev {
    double t;
    int agent;
    EvKind kind;
    bool operator<(const Ev& o) const {
        if (t != o.t) return t < o.t;
        if (agent != o.agent) return agent < o.agent;
        return static_cast<int>(kind) < static_cast<int>(o.kind);
    }
};

const char* kind_name(EvKind k) {
    switch (k) {
        case EvKind::Join: return "join";
        case EvKind::Replan: return "replan";
        case EvKind::Leave: return "leave";
    }
    return "?";
}

/// Serialized event queue: the simulation realization of the no-simultaneous-
/// update rule. Any two events closer than 1 ns get separated by 1 us.
class EventQueue {
public:
    void push(Ev ev) {
        ev.t = place(ev.t);
        queue_.insert(ev);
    }
    bool empty() const { return queue_.empty(); }
    const Ev& top() const { return *queue_.begin(); }
    Ev pop() {
        Ev ev = *queue_.begin();
        queue_.erase(queue_.begin());
        return ev;
    }

private:
    double place(double t) const {
        constexpr double kTieGap = 1e-9;
        constexpr double kSep = 1e-6;
        auto it = queue_.lower_bound({t - kTieGap, std::numeric_limits<int>::min(), EvKind::Join});
        while (it != queue_.end() && it->t <= t + kTieGap) {
            t = it->t + kSep;
            it = queue_.lower_bound({t - kTieGap, std::numeric_limits<int>::min(), EvKind::Join});
        }
        return t;
    }

    std::set<Ev> queue_;
};

uint64_t mix_seed(uint64_t base, int agent, int salt) {
    uint64_t z = base ^ (0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(agent) + 0x51ULL)) ^
                 (0xc2b2ae3d27d4eb4fULL * (static_cast<uint64_t>(salt) + 1));
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    return z ^ (z >> 33);
}

}  // namespace

RunResult run(const Scenario& scenario, const SimConfig& cfg, PostEventHook hook) {
    if (!(cfg.oracle_dt <= cfg.sim_dt + 1e-12)) {
        throw std::invalid_argument("run: oracle_dt must be <= sim_dt");
    }

    RunResult out;
    World& world = out.world;
    world.env = scenario.env;
    world.params = scenario.params;
    world.dyn = scenario.dyn;
    world.gatekeeper = cfg.gatekeeper;
    world.planner = cfg.planner;
    world.seed = scenario.seed;

    int n = static_cast<int>(scenario.agents.size());
    world.agents.resize(static_cast<size_t>(n));
    out.traces.resize(static_cast<size_t>(n));
    std::vector<int> join_attempts(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        AgentRecord& a = world.agents[static_cast<size_t>(i)];
        a.id = i;
        a.state = scenario.agents[static_cast<size_t>(i)].spawn;
        a.goal = scenario.agents[static_cast<size_t>(i)].goal;
        out.traces[static_cast<size_t>(i)].id = i;
    }

    EventQueue queue;
    {
        std::vector<ArbitrationRequest> joins;
        for (int i = 0; i < n; ++i) {
            joins.push_back({i, scenario.agents[static_cast<size_t>(i)].join_time,
                             scenario.agents[static_cast<size_t>(i)].spawn.position()});
        }
        joins = arbitration_schedule(std::move(joins), world.params.r_comm(), world.dyn.v);
        for (const auto& rq : joins) queue.push({rq.t, rq.agent, EvKind::Join});
        for (const auto& [t, agent] : cfg.leaves) queue.push({t, agent, EvKind::Leave});
    }

    double total_replan_ms = 0.0;
    long n_updates = 0;
    long n_failures = 0;
    long total_neighbors = 0;

    double last_event_t = -1.0;
    Point2 last_event_pos;

    auto orbit_in_goal = [&](const AgentRecord& a) {
        const LoiterOrbit& orbit = *a.committed->cand.base.tail;
        return dist_point_point(orbit.center, a.goal) + orbit.radius <= cfg.goal_tolerance;
    };

    auto process = [&](const Ev& ev) {
        AgentRecord& agent = world.agents.at(static_cast<size_t>(ev.agent));
        if (agent.status == AgentStatus::Retired) return;

        SimEventRec rec;
        rec.t = ev.t;
        rec.kind = kind_name(ev.kind);
        rec.agent = ev.agent;

        if (ev.kind == EvKind::Leave) {
            if (agent.status == AgentStatus::Active) {
                agent.state = sample_at(agent.committed->cand.base, ev.t);
            }
            agent.status = AgentStatus::Retired;
            rec.outcome = "Retired";
            out.events.push_back(rec);
            if (hook) hook(world, rec);
            return;
        }
        if (ev.kind == EvKind::Join && agent.status != AgentStatus::Pending) return;
        if (ev.kind == EvKind::Replan &&
            (agent.status != AgentStatus::Active || agent.goal_reached)) {
            return;
        }

        // serialized arbitration guard: communicating agents never share a stamp
        Point2 here = agent_position(world, ev.agent, ev.t);
        if (ev.t == last_event_t &&
            dist_point_point(here, last_event_pos) <= world.params.r_comm()) {
            throw std::logic_error("arbitration breach: simultaneous neighboring updates");
        }
        last_event_t = ev.t;
        last_event_pos = here;

        UpdateRecord ur = update_state(world, ev.agent, ev.t);
        rec.outcome = to_string(ur.outcome);
        rec.switch_time = ur.switch_time;
        rec.n_neighbors = ur.n_neighbors;
        rec.replan_ms = cfg.log_wall_times ? ur.replan_wall_ms : 0.0;

        total_replan_ms += ur.replan_wall_ms;
        n_updates += 1;
        total_neighbors += ur.n_neighbors;
        out.metrics.max_neighbors = std::max(out.metrics.max_neighbors, ur.n_neighbors);
        for (const SwitchAttempt& at : ur.attempts) {
            AttemptRec ar;
            ar.t = ev.t;
            ar.agent = ev.agent;
            ar.switch_time = at.switch_time;
            ar.valid = at.report.valid;
            if (!at.report.valid) ar.failed_condition = to_string(*at.report.failed_condition);
            out.attempts.push_back(ar);
        }

        switch (ur.outcome) {
            case UpdateOutcome::Joined:
            case UpdateOutcome::Committed:
                if (orbit_in_goal(agent)) {
                    agent.goal_reached = true;
                } else {
                    queue.push({next_trigger(agent, cfg.trigger, ev.t), ev.agent, EvKind::Replan});
                }
                break;
            case UpdateOutcome::KeptOld: {
                n_failures += 1;
                queue.push({next_trigger(agent, cfg.trigger, ev.t), ev.agent, EvKind::Replan});
                break;
            }
            case UpdateOutcome::JoinRejected: {
                n_failures += 1;
                int attempt = join_attempts[static_cast<size_t>(ev.agent)]++;
                double delay = std::min(cfg.join_retry_cap,
                                        cfg.join_retry_base * std::pow(2.0, attempt));
                double jitter = static_cast<double>(mix_seed(world.seed, ev.agent, attempt) %
                                                    1000) /
                                1000.0;
                queue.push({ev.t + delay * (1.0 + 0.1 * jitter), ev.agent, EvKind::Join});
                break;
            }
        }
        out.events.push_back(rec);
        if (hook) hook(world, rec);
    };

    double t = 0.0;
    auto steps = static_cast<long>(std::ceil(scenario.duration / cfg.sim_dt - 1e-9));
    for (long k = 0; k <= steps; ++k) {
        t = std::min(scenario.duration, static_cast<double>(k) * cfg.sim_dt);
        while (!queue.empty() && queue.top().t <= t) process(queue.pop());

        bool all_done = true;
        for (AgentRecord& a : world.agents) {
            if (a.status == AgentStatus::Active) {
                a.state = sample_at(a.committed->cand.base, t);
                out.traces[static_cast<size_t>(a.id)].samples.push_back(
                    {t, a.state.x, a.state.y, a.state.theta,
                     control_at(a.committed->cand.base, t)});
            }
            if (a.status != AgentStatus::Retired && !a.goal_reached) all_done = false;
        }
        if (all_done) break;
    }
    out.end_time = t;

    // metrics
    int eligible = 0, succeeded = 0;
    for (const AgentRecord& a : world.agents) {
        if (a.status == AgentStatus::Retired) continue;
        eligible += 1;
        Point2 pos = a.status == AgentStatus::Active
                         ? sample_at(a.committed->cand.base, t).position()
                         : a.state.position();
        if (dist_point_point(pos, a.goal) <= cfg.goal_tolerance) succeeded += 1;
        if (a.status == AgentStatus::Active && !a.goal_reached &&
            t - a.last_commit_time > cfg.deadlock_window) {
            out.metrics.deadlocked_agents += 1;
        }
    }
    out.metrics.success_fraction = eligible > 0 ? static_cast<double>(succeeded) / eligible : 1.0;
    out.metrics.mean_replan_ms = n_updates > 0 ? total_replan_ms / n_updates : 0.0;
    out.metrics.replan_failure_rate =
        n_updates > 0 ? static_cast<double>(n_failures) / n_updates : 0.0;
    out.metrics.avg_neighbors_per_replan =
        n_updates > 0 ? static_cast<double>(total_neighbors) / n_updates : 0.0;

    auto violations = oracle_check(out.traces, scenario, cfg.oracle_dt);
    out.metrics.safety_violations = static_cast<int>(violations.size());
    return out;
}

std::vector<DensityRow> density_sweep(int n, const std::vector<double>& side_lengths, int trials,
                                      uint64_t base_seed, const R3RParams& params,
                                      const DubinsParams& dyn, const SimConfig& cfg,
                                      double sim_duration) {
    if (n < 1 || trials < 1 || side_lengths.empty()) {
        throw std::invalid_argument("density_sweep: need n >= 1, trials >= 1, nonempty sides");
    }
    std::vector<DensityRow> rows;
    for (double side : side_lengths) {
        for (int trial = 0; trial < trials; ++trial) {
            uint64_t seed = base_seed + static_cast<uint64_t>(trial) +
                            1000003ULL * static_cast<uint64_t>(rows.size());
            Scenario sc{make_empty_arena(side, 0.5, default_inflation(params.delta())),
                        {},
                        params,
                        dyn,
                        sim_duration,
                        seed,
                        "density"};
            // dense placement: spawn separation relaxed to a loiter-scale gap so
            // high densities are placeable; rejected joiners simply retry
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> u(0.0, side);
            double sep = 4.0 * dyn.turn_radius() + params.delta();
            double clear = 2.0 * dyn.turn_radius() + 0.5;
            for (int i = 0; i < n; ++i) {
                bool ok = false;
                for (int tries = 0; tries < 10000 && !ok; ++tries) {
                    Point2 p{u(rng), u(rng)};
                    if (!sc.env.in_safe_set(p, clear)) continue;
                    ok = true;
                    for (const auto& other : sc.agents) {
                        if (dist_point_point(p, other.spawn.position()) < sep) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) continue;
                    Point2 g{u(rng), u(rng)};
                    if (!sc.env.in_safe_set(g, clear)) {
                        ok = false;
                        continue;
                    }
                    AgentSpawn a;
                    a.spawn = {p.x, p.y, wrap_angle(std::atan2(g.y - p.y, g.x - p.x))};
                    a.goal = g;
                    sc.agents.push_back(a);
                }
                if (!ok) throw std::runtime_error("density_sweep: placement failed");
            }
            RunResult rr = run(sc, cfg);
            DensityRow row;
            row.side = side;
            row.density = static_cast<double>(n) / (side * side);
            row.trial = trial;
            row.mean_replan_ms = rr.metrics.mean_replan_ms;
            row.failure_rate = rr.metrics.replan_failure_rate;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace r3r
