#include "r3r/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "r3r/dubins_path.hpp"

namespace r3r {

namespace {

constexpr double kEps = 1e-9;

struct Node {
    DubinsState state;
    int parent = -1;
    double cost = 0.0;  // meters from root
    double time = 0.0;  // seconds from root (= cost / v)
    std::vector<ControlSegment> ctrl;  // edge from parent
    std::vector<int> children;
};

struct ArcSamples {
    std::vector<DubinsState> states;
    std::vector<double> times;  // relative to arc start
};

ArcSamples sample_segments(const DubinsState& from, const std::vector<ControlSegment>& segs,
                           double check_ds, const DubinsParams& p) {
    ArcSamples out;
    DubinsState s = from;
    double t = 0.0;
    out.states.push_back(s);
    out.times.push_back(0.0);
    double step_dt = check_ds / p.v;
    for (const auto& seg : segs) {
        double left = seg.duration;
        while (left > kEps) {
            double h = std::min(step_dt, left);
            s = arc_step(s, seg.omega, h, p);
            t += h;
            left -= h;
            out.states.push_back(s);
            out.times.push_back(t);
        }
    }
    return out;
}

}  // namespace

SteerResult steer_dubins(const DubinsState& from, const Point2& to, double max_arc,
                         const DubinsParams& p) {
    if (!(max_arc > 0.0)) throw std::invalid_argument("steer_dubins: max_arc must be > 0");
    double dx = to.x - from.x;
    double dy = to.y - from.y;
    double c = std::cos(from.theta), s = std::sin(from.theta);
    double lx = c * dx + s * dy;   // target in body frame
    double ly = -s * dx + c * dy;
    double dist = std::hypot(lx, ly);

    // curvature of the tangent circle through the target, clamped to feasible
    double omega_exact = 0.0;
    double d2 = lx * lx + ly * ly;
    if (d2 > kEps) omega_exact = std::clamp(2.0 * ly / d2 * p.v, -p.omega_max, p.omega_max);

    const double omegas[] = {omega_exact, 0.0, p.omega_max, -p.omega_max};
    double lmax = std::min(max_arc, std::max(dist, 0.25 * max_arc));
    std::vector<double> lengths = {0.25 * lmax, 0.5 * lmax, 0.75 * lmax, lmax};
    if (dist > kEps && dist < lmax) lengths.push_back(dist);

    SteerResult best;
    double best_d = std::numeric_limits<double>::infinity();
    for (double omega : omegas) {
        for (double len : lengths) {
            if (len <= kEps) continue;
            DubinsState end = arc_step(from, omega, len / p.v, p);
            double d = dist_point_point(end.position(), to);
            if (d + kEps < best_d) {
                best_d = d;
                best = {omega, len, end};
            }
        }
    }
    return best;
}

bool edge_collision_free(std::span<const DubinsState> samples, std::span<const double> rel_times,
                         const OccupancyEnvironment& env, const NeighborTrajectories& neighbors,
                         double t_offset, double delta, double margin) {
    for (size_t i = 0; i < samples.size(); ++i) {
        if (!env.in_safe_set(samples[i].position(), 0.0)) return false;
        double t_abs = t_offset + rel_times[i];
        for (const SampledTrajectory* nb : neighbors) {
            if (t_abs < nb->t0 - kEps) continue;
            double d = dist_point_point(samples[i].position(), sample_at(*nb, t_abs).position());
            if (d < delta + margin) return false;
        }
    }
    return true;
}

NominalResult plan_nominal(const DubinsState& start, const Point2& goal,
                           const OccupancyEnvironment& env, const NeighborTrajectories& neighbors,
                           const PlannerConfig& cfg, const DubinsParams& p, double delta,
                           double t0, PlannerDebug debug) {
    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> uang(0.0, 2.0 * std::numbers::pi);

    const double rho = p.turn_radius();
    const double horizon = cfg.horizon;
    const double sample_radius = p.v * horizon + cfg.step_arc_length;
    const double dock_radius = std::max(3.0 * rho, cfg.step_arc_length + rho);

    std::vector<Node> nodes;
    nodes.push_back({start, -1, 0.0, 0.0, {}, {}});
    int goal_node = -1;
    bool docked = false;

    auto arc_free = [&](const DubinsState& from, const std::vector<ControlSegment>& segs,
                        double edge_t0) {
        ArcSamples arc = sample_segments(from, segs, cfg.check_ds, p);
        return edge_collision_free(arc.states, arc.times, env, neighbors, edge_t0, delta,
                                   cfg.neighbor_margin);
    };

    auto note_cost = [&](int idx) {
        if (debug.cost_updates != nullptr) {
            debug.cost_updates->push_back({idx, nodes[static_cast<size_t>(idx)].cost});
        }
    };

    auto update_subtree = [&](int root_idx, double dcost) {
        std::vector<int> stack{root_idx};
        while (!stack.empty()) {
            int idx = stack.back();
            stack.pop_back();
            nodes[static_cast<size_t>(idx)].cost += dcost;
            nodes[static_cast<size_t>(idx)].time += dcost / p.v;
            note_cost(idx);
            for (int ch : nodes[static_cast<size_t>(idx)].children) stack.push_back(ch);
        }
    };

    auto try_dock = [&](int from_idx) {
        const Node& nd = nodes[static_cast<size_t>(from_idx)];
        double best_len = std::numeric_limits<double>::infinity();
        std::optional<DubinsPath> best_path;
        for (int dir = 0; dir < 2; ++dir) {  // 0 = ccw first (tie preference)
            for (int k = 0; k < 4; ++k) {
                double psi = k * std::numbers::pi / 2.0;
                DubinsState dock;
                dock.x = goal.x + rho * std::cos(psi);
                dock.y = goal.y + rho * std::sin(psi);
                dock.theta = wrap_angle(psi + (dir == 0 ? 1.0 : -1.0) * std::numbers::pi / 2.0);
                auto dp = dubins_shortest_path(nd.state, dock, rho);
                if (!dp) continue;
                double len = dp->length();
                if (len + kEps >= best_len) continue;
                if (nd.time + len / p.v > horizon + kEps) continue;
                auto segs = dubins_controls(*dp, p);
                if (!arc_free(nd.state, segs, t0 + nd.time)) continue;
                best_len = len;
                best_path = dp;
            }
        }
        if (!best_path) return false;
        auto segs = dubins_controls(*best_path, p);
        DubinsState end = dubins_path_sample(*best_path, best_path->length());
        Node dock_node{end, from_idx, nodes[static_cast<size_t>(from_idx)].cost + best_len,
                       nodes[static_cast<size_t>(from_idx)].time + best_len / p.v, segs, {}};
        nodes.push_back(dock_node);
        nodes[static_cast<size_t>(from_idx)].children.push_back(static_cast<int>(nodes.size()) - 1);
        goal_node = static_cast<int>(nodes.size()) - 1;
        note_cost(goal_node);
        return true;
    };

    for (int iter = 0; iter < cfg.max_iterations && !docked; ++iter) {
        Point2 target;
        if (u01(rng) < cfg.goal_bias) {
            target = goal;
        } else {
            double r = sample_radius * std::sqrt(u01(rng));
            double a = uang(rng);
            target = {start.x + r * std::cos(a), start.y + r * std::sin(a)};
        }

        // nearest extendable node
        int nearest = -1;
        double nearest_d = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].time >= horizon - kEps) continue;
            double d = dist_point_point(nodes[i].state.position(), target);
            if (d < nearest_d - kEps) {
                nearest_d = d;
                nearest = static_cast<int>(i);
            }
        }
        if (nearest < 0) break;

        SteerResult st = steer_dubins(nodes[static_cast<size_t>(nearest)].state, target,
                                      cfg.step_arc_length, p);
        double remaining = (horizon - nodes[static_cast<size_t>(nearest)].time) * p.v;
        double length = std::min(st.length, remaining);
        if (length <= 1e-6) continue;
        DubinsState end = arc_step(nodes[static_cast<size_t>(nearest)].state, st.omega,
                                   length / p.v, p);
        std::vector<ControlSegment> steer_ctrl{{st.omega, length / p.v}};
        if (!arc_free(nodes[static_cast<size_t>(nearest)].state, steer_ctrl,
                      t0 + nodes[static_cast<size_t>(nearest)].time)) {
            continue;
        }

        // choose the cheapest collision-free parent in the rewire ball
        int parent = nearest;
        double best_cost = nodes[static_cast<size_t>(nearest)].cost + length;
        std::vector<ControlSegment> best_ctrl = steer_ctrl;
        std::vector<int> near;
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (dist_point_point(nodes[i].state.position(), end.position()) <= cfg.rewire_radius) {
                near.push_back(static_cast<int>(i));
            }
        }
        for (int j : near) {
            if (j == nearest) continue;
            auto dp = dubins_shortest_path(nodes[static_cast<size_t>(j)].state, end, rho);
            if (!dp) continue;
            double c = nodes[static_cast<size_t>(j)].cost + dp->length();
            if (c + kEps >= best_cost) continue;
            if (nodes[static_cast<size_t>(j)].time + dp->length() / p.v > horizon + kEps) continue;
            auto segs = dubins_controls(*dp, p);
            if (!arc_free(nodes[static_cast<size_t>(j)].state, segs,
                          t0 + nodes[static_cast<size_t>(j)].time)) {
                continue;
            }
            parent = j;
            best_cost = c;
            best_ctrl = segs;
        }

        Node node{end, parent, best_cost,
                  nodes[static_cast<size_t>(parent)].time +
                      (best_cost - nodes[static_cast<size_t>(parent)].cost) / p.v,
                  best_ctrl, {}};
        nodes.push_back(node);
        int new_idx = static_cast<int>(nodes.size()) - 1;
        nodes[static_cast<size_t>(parent)].children.push_back(new_idx);
        note_cost(new_idx);

        // rewire the neighborhood through the new node
        for (int j : near) {
            if (j == parent || j == 0) continue;
            auto dp = dubins_shortest_path(end, nodes[static_cast<size_t>(j)].state, rho);
            if (!dp) continue;
            double c = best_cost + dp->length();
            if (c + kEps >= nodes[static_cast<size_t>(j)].cost) continue;
            if (nodes[static_cast<size_t>(new_idx)].time + dp->length() / p.v > horizon + kEps) {
                continue;
            }
            auto segs = dubins_controls(*dp, p);
            if (!arc_free(end, segs, t0 + nodes[static_cast<size_t>(new_idx)].time)) continue;
            int old_parent = nodes[static_cast<size_t>(j)].parent;
            auto& siblings = nodes[static_cast<size_t>(old_parent)].children;
            siblings.erase(std::find(siblings.begin(), siblings.end(), j));
            nodes[static_cast<size_t>(j)].parent = new_idx;
            nodes[static_cast<size_t>(j)].ctrl = segs;
            nodes[static_cast<size_t>(new_idx)].children.push_back(j);
            update_subtree(j, c - nodes[static_cast<size_t>(j)].cost);
        }

        double d_goal = dist_point_point(end.position(), goal);
        if (d_goal <= cfg.goal_tolerance &&
            (goal_node < 0 || best_cost < nodes[static_cast<size_t>(goal_node)].cost)) {
            goal_node = new_idx;
        }
        if (d_goal <= dock_radius && try_dock(new_idx)) {
            docked = true;
        }
    }

    // fall back to the most goal-ward branch when nothing reached the goal
    int best = goal_node;
    if (best < 0) {
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < nodes.size(); ++i) {
            double d = dist_point_point(nodes[i].state.position(), goal);
            if (d + kEps < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
    }

    std::vector<ControlSegment> schedule;
    {
        std::vector<int> chain;
        for (int idx = best; idx >= 0; idx = nodes[static_cast<size_t>(idx)].parent) {
            chain.push_back(idx);
        }
        std::reverse(chain.begin(), chain.end());
        for (int idx : chain) {
            const auto& c = nodes[static_cast<size_t>(idx)].ctrl;
            schedule.insert(schedule.end(), c.begin(), c.end());
        }
    }

    double branch_time = nodes[static_cast<size_t>(best)].time;
    if (branch_time < horizon - kEps) {
        const DubinsState& end_state = nodes[static_cast<size_t>(best)].state;
        double pad_omega;
        if (docked) {
            // stay on the goal orbit the dock landed on
            Point2 rel = end_state.position() - goal;
            double cross = rel.x * std::sin(end_state.theta) - rel.y * std::cos(end_state.theta);
            pad_omega = cross > 0.0 ? p.omega_max : -p.omega_max;
        } else {
            LoiterDirection dir = choose_loiter_direction(end_state, start.position(),
                                                          p.v * horizon, p, &env);
            pad_omega = dir == LoiterDirection::Counterclockwise ? p.omega_max : -p.omega_max;
        }
        schedule.push_back({pad_omega, horizon - branch_time});
    }

    NominalResult out;
    out.trajectory = propagate(start, schedule, cfg.traj_dt, horizon, p, t0);
    out.reached_goal = goal_node >= 0;
    out.cost = nodes[static_cast<size_t>(best)].cost;

    if (debug.tree_dump != nullptr) {
        std::string& dump = *debug.tree_dump;
        char line[160];
        for (const auto& n : nodes) {
            std::snprintf(line, sizeof(line), "%d %.6f %.6f %.6f %.6f\n", n.parent, n.state.x,
                          n.state.y, n.state.theta, n.cost);
            dump += line;
        }
    }
    return out;
}

}  // namespace r3r
