#include <benchmark/benchmark.h>

#include "r3r/planner.hpp"
#include "r3r/validation.hpp"

namespace {

using namespace r3r;

const DubinsParams kDyn{1.0, 2.0};

SampledTrajectory loiter_only(Point2 at, double t0) {
    std::vector<ControlSegment> hold{{kDyn.omega_max, 0.0}};
    SampledTrajectory t = propagate({at.x, at.y, 0.0}, hold, 0.05, 0.0, kDyn, t0);
    t.tail = make_loiter(t.states.back(), LoiterDirection::Counterclockwise, kDyn, t0);
    return t;
}

void BM_MinSeparation(benchmark::State& state) {
    std::vector<ControlSegment> sched{{0.3, 2.0}, {-0.5, 2.0}};
    SampledTrajectory a = propagate({0, 0, 0}, sched, 0.05, 4.0, kDyn, 0.0);
    a.tail = make_loiter(a.states.back(), LoiterDirection::Counterclockwise, kDyn, a.end_time());
    SampledTrajectory b = propagate({6, 1, 3.0}, sched, 0.05, 4.0, kDyn, 0.0);
    b.tail = make_loiter(b.states.back(), LoiterDirection::Clockwise, kDyn, b.end_time());
    for (auto _ : state) {
        benchmark::DoNotOptimize(min_separation(a, b, 0.0, 0.05));
    }
}
BENCHMARK(BM_MinSeparation);

void BM_IsValid(benchmark::State& state) {
    OccupancyEnvironment env = make_empty_arena(40.0, 0.5, 0.5);
    R3RParams params = R3RParams::from_comm_radius(16.0, 0.5);
    GatekeeperConfig gk;
    std::vector<ControlSegment> sched{{0.0, 4.0}};
    SampledTrajectory nom = propagate({20, 20, 0}, sched, 0.05, 4.0, kDyn, 0.0);
    CandidateTrajectory cand = compose_candidate(nom, 2.0, kDyn);
    std::vector<CommitPtr> neighbors;
    for (int i = 0; i < 4; ++i) {
        auto c = std::make_shared<CommittedTrajectory>();
        c->cand.base = loiter_only({12.0 + 4.0 * i, 14.0}, 0.0);
        c->owner = i + 1;
        neighbors.push_back(c);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(is_valid(cand, neighbors, env, params, gk));
    }
}
BENCHMARK(BM_IsValid);

void BM_PlanNominal(benchmark::State& state) {
    OccupancyEnvironment env = make_empty_arena(40.0, 0.5, 0.5);
    PlannerConfig cfg;
    cfg.rng_seed = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            plan_nominal({20, 20, 0}, {24, 22}, env, {}, cfg, kDyn, 0.5, 0.0));
    }
}
BENCHMARK(BM_PlanNominal);

}  // namespace

BENCHMARK_MAIN();
