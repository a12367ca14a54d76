#include <doctest.h>

#include <map>
#include <numbers>
#include <random>

#include "r3r/planner.hpp"
#include "support/oracles.hpp"

using namespace r3r;

namespace {
const DubinsParams kDyn{1.0, 2.0};

PlannerConfig quick_cfg(uint64_t seed) {
    PlannerConfig cfg;
    cfg.rng_seed = seed;
    return cfg;
}
}  // namespace

TEST_CASE("steer picks the obvious primitive") {
    SteerResult ahead = steer_dubins({0, 0, 0}, {5, 0}, 1.0, kDyn);
    CHECK(ahead.omega == doctest::Approx(0.0));
    CHECK(ahead.length == doctest::Approx(1.0));

    SteerResult left = steer_dubins({0, 0, 0}, {0, 50}, 1.0, kDyn);
    CHECK(left.omega == doctest::Approx(kDyn.omega_max));

    // end distance never beats the triangle inequality
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    for (int i = 0; i < 300; ++i) {
        DubinsState from{u(rng), u(rng), u(rng) / 3.0};
        Point2 to{u(rng), u(rng)};
        SteerResult st = steer_dubins(from, to, 1.0, kDyn);
        double before = dist_point_point(from.position(), to);
        double after = dist_point_point(st.end.position(), to);
        CHECK(after <= before + 1.0 + 1e-9);
        CHECK(st.length <= 1.0 + 1e-12);
    }
}

TEST_CASE("edge check vetoes occupied cells and matching-phase neighbors") {
    OccupancyEnvironment env = load_map("8 8 1.0\n........\n........\n........\n....#...\n"
                                        "........\n........\n........\n........\n");
    std::vector<DubinsState> samples{{1.0, 1.0, 0.0}, {4.5, 4.5, 0.0}};
    std::vector<double> times{0.0, 1.0};
    CHECK_FALSE(edge_collision_free(samples, times, env, {}, 0.0, 0.5, 0.1));

    std::vector<DubinsState> clear{{1.0, 1.0, 0.0}, {2.0, 1.0, 0.0}};
    CHECK(edge_collision_free(clear, times, env, {}, 0.0, 0.5, 0.1));

    // a neighbor loitering across the arc kills it at the matching time only
    SampledTrajectory nb;
    nb.t0 = 0.0;
    nb.states = {{2.0, 1.0, 0.0}};
    nb.tail = make_loiter({2.0, 1.0, 0.0}, LoiterDirection::Counterclockwise, kDyn, 0.0);
    NeighborTrajectories nbs{&nb};
    CHECK_FALSE(edge_collision_free(clear, times, env, nbs, 0.0, 0.5, 0.1));
    double half_period = nb.tail->period() / 2.0;
    CHECK(edge_collision_free(clear, times, env, nbs, half_period, 0.5, 0.1));
}

TEST_CASE("empty environment, goal straight ahead") {
    OccupancyEnvironment env = make_empty_arena(20.0, 0.5, 0.5);
    NominalResult res =
        plan_nominal({7.0, 10.0, 0.0}, {10.0, 10.0}, env, {}, quick_cfg(21), kDyn, 0.5, 0.0);
    CHECK(res.reached_goal);
    CHECK(res.cost >= 3.0 * 0.9);
    CHECK(res.cost <= 3.0 * 1.1);
    CHECK(res.trajectory.duration() == doctest::Approx(4.0));
    CHECK(res.trajectory.states.size() == res.trajectory.controls.size() + 1);
}

TEST_CASE("goal behind a wall with a gap") {
    // wall across the middle with a one-cell gap
    std::string doc = "15 15 1.0\n";
    for (int r = 0; r < 15; ++r) {
        std::string row(15, '.');
        if (r == 7) {
            row = std::string(15, '#');
            row[10] = '.';
        }
        doc += row + "\n";
    }
    OccupancyEnvironment env = load_map(doc, 0.3);
    PlannerConfig cfg = quick_cfg(5);
    cfg.horizon = 10.0;
    cfg.max_iterations = 4000;
    NominalResult res =
        plan_nominal({10.5, 3.5, std::numbers::pi / 2}, {10.5, 11.5}, env, {}, cfg, kDyn, 0.5, 0.0);

    bool crossed = false;
    for (const DubinsState& s : res.trajectory.states) {
        CHECK(env.in_safe_set(s.position(), 0.0));
        if (s.y > 8.0) crossed = true;
    }
    CHECK(crossed);
}

TEST_CASE("boxed start yields the degenerate loiter nominal") {
    // start cell is free but fully ringed by obstacles
    OccupancyEnvironment env = load_map("5 5 1.0\n#####\n#####\n##.##\n#####\n#####\n");
    NominalResult res =
        plan_nominal({2.5, 2.5, 0.0}, {10.0, 10.0}, env, {}, quick_cfg(3), kDyn, 0.5, 0.0);
    CHECK_FALSE(res.reached_goal);
    CHECK(res.cost == doctest::Approx(0.0));
    CHECK(res.trajectory.duration() == doctest::Approx(4.0));
    // zero progress: it stays on the max-turn circle from the start state
    for (const DubinsState& s : res.trajectory.states) {
        CHECK(dist_point_point(s.position(), {2.5, 2.5}) <= 2.0 * kDyn.turn_radius() + 1e-6);
    }
}

TEST_CASE("identical inputs and seed reproduce the identical nominal") {
    OccupancyEnvironment env = make_empty_arena(30.0, 0.5, 0.5);
    PlannerConfig cfg = quick_cfg(99);
    NominalResult a =
        plan_nominal({15.0, 15.0, 0.3}, {22.0, 18.0}, env, {}, cfg, kDyn, 0.5, 0.0);
    NominalResult b =
        plan_nominal({15.0, 15.0, 0.3}, {22.0, 18.0}, env, {}, cfg, kDyn, 0.5, 0.0);
    REQUIRE(a.trajectory.states.size() == b.trajectory.states.size());
    for (size_t i = 0; i < a.trajectory.states.size(); ++i) {
        CHECK(a.trajectory.states[i].x == b.trajectory.states[i].x);
        CHECK(a.trajectory.states[i].y == b.trajectory.states[i].y);
        CHECK(a.trajectory.states[i].theta == b.trajectory.states[i].theta);
    }
    CHECK(a.cost == b.cost);
}

TEST_CASE("returned trajectories are dynamically feasible") {
    OccupancyEnvironment env = make_empty_arena(30.0, 0.5, 0.5);
    for (uint64_t seed = 0; seed < 10; ++seed) {
        NominalResult res = plan_nominal({15.0, 15.0, 0.0}, {10.0 + seed, 20.0}, env, {},
                                         quick_cfg(seed), kDyn, 0.5, 0.0);
        const SampledTrajectory& t = res.trajectory;
        for (size_t i = 0; i + 1 < t.states.size(); ++i) {
            double dth = wrap_angle(t.states[i + 1].theta - t.states[i].theta);
            CHECK(std::abs(dth) / t.dt <= kDyn.omega_max + 1e-6);
            double ds = dist_point_point(t.states[i + 1].position(), t.states[i].position());
            CHECK(ds <= kDyn.v * t.dt + 1e-9);
        }
    }
}

TEST_CASE("rewiring never raises a retained node's cost") {
    OccupancyEnvironment env = make_empty_arena(30.0, 0.5, 0.5);
    PlannerConfig cfg = quick_cfg(12);
    cfg.max_iterations = 400;
    std::vector<std::pair<int, double>> updates;
    PlannerDebug dbg;
    dbg.cost_updates = &updates;
    plan_nominal({15.0, 15.0, 0.0}, {21.0, 21.0}, env, {}, cfg, kDyn, 0.5, 0.0, dbg);

    std::map<int, double> latest;
    int rewires = 0;
    for (const auto& [idx, cost] : updates) {
        auto it = latest.find(idx);
        if (it != latest.end()) {
            CHECK(cost <= it->second + 1e-9);
            rewires += 1;
            it->second = cost;
        } else {
            latest[idx] = cost;
        }
    }
    INFO("rewires observed: " << rewires);
}
