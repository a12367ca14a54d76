#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "r3r/trajectory.hpp"
#include "support/oracles.hpp"

using namespace r3r;
using namespace r3r::testing;

namespace {
const DubinsParams kUnit{1.0, 1.0};

SampledTrajectory pure_loiter(const DubinsState& entry, LoiterDirection dir,
                              const DubinsParams& p, double t0) {
    SampledTrajectory t;
    t.t0 = t0;
    t.states = {entry};
    t.tail = make_loiter(entry, dir, p, t0);
    return t;
}
}  // namespace

TEST_CASE("sample_at hits grid points exactly and interpolates between") {
    SampledTrajectory traj = propagate({0, 0, 0}, {{0.5, 4.0}}, 0.05, 4.0, kUnit);
    CHECK(sample_at(traj, 0.0).x == doctest::Approx(traj.states[0].x));
    DubinsState s7 = sample_at(traj, 7 * traj.dt);
    CHECK(s7.x == doctest::Approx(traj.states[7].x).epsilon(1e-12));
    CHECK(s7.theta == doctest::Approx(traj.states[7].theta).epsilon(1e-12));

    DubinsState mid = sample_at(traj, 7.5 * traj.dt);
    CHECK(mid.x == doctest::Approx(0.5 * (traj.states[7].x + traj.states[8].x)));

    CHECK_THROWS_AS(sample_at(traj, 4.1), std::invalid_argument);  // finite, no tail

    traj.tail = make_loiter(traj.states.back(), LoiterDirection::Counterclockwise, kUnit,
                            traj.end_time());
    DubinsState in_tail = sample_at(traj, 6.0);
    DubinsState expect = orbit_state_at(*traj.tail, 6.0);
    CHECK(in_tail.x == doctest::Approx(expect.x).epsilon(1e-12));
    CHECK(in_tail.y == doctest::Approx(expect.y).epsilon(1e-12));
}

TEST_CASE("interpolation unwraps the heading") {
    // two samples straddling the pi boundary must not lerp through zero
    SampledTrajectory traj;
    traj.t0 = 0.0;
    traj.dt = 0.1;
    traj.states = {{0, 0, 3.1}, {0.1, 0, -3.1}};
    traj.controls = {1.0};
    double th = sample_at(traj, 0.05).theta;
    CHECK(std::abs(th) > 3.1);  // stays near the boundary, not near 0
}

TEST_CASE("candidate composition at the boundaries") {
    SampledTrajectory nominal = propagate({0, 0, 0}, {{0.0, 3.0}}, 0.05, 3.0, kUnit);

    CandidateTrajectory backup_only = compose_candidate(nominal, 0.0, kUnit);
    CHECK(backup_only.base.states.size() == 1);
    CHECK(backup_only.switch_time == doctest::Approx(0.0));
    CHECK(backup_only.base.tail->entry_time == doctest::Approx(0.0));

    CandidateTrajectory full = compose_candidate(nominal, 3.0, kUnit);
    CHECK(full.base.states.size() == nominal.states.size());
    CHECK(full.base.tail->entry_time == doctest::Approx(3.0));
    full.base.check_invariants();
}

TEST_CASE("candidate displacement: straight prefix plus loiter") {
    SampledTrajectory nominal = propagate({0, 0, 0}, {{0.0, 3.0}}, 0.05, 3.0, kUnit);
    CandidateTrajectory cand = compose_candidate(nominal, 1.5, kUnit);
    CHECK(cand.base.duration() == doctest::Approx(1.5));

    double measured = brute_max_displacement(cand.base, cand.anchor, 0.002, 2);
    // dense sampling pins the tight value; the coarse prefix-plus-diameter
    // bound (1.5 + 2 = 3.5) must also hold
    CHECK(measured == doctest::Approx(std::sqrt(1.5 * 1.5 + 1.0) + 1.0).epsilon(1e-4));
    CHECK(measured <= 3.5);
    CHECK(max_anchor_displacement(cand.base, cand.anchor) ==
          doctest::Approx(measured).epsilon(1e-4));
}

TEST_CASE("splice continuity holds for random compositions") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        BoundedSample s = random_bounded_trajectory(rng, kUnit, u01(rng) * 5.0);
        SampledTrajectory nominal = s.traj;
        nominal.tail.reset();
        if (nominal.controls.empty()) continue;
        CandidateTrajectory cand =
            compose_candidate(nominal, u01(rng) * nominal.duration(), kUnit);
        cand.base.check_invariants();  // includes the 1e-6 splice check
        CHECK(cand.anchor_time == doctest::Approx(cand.base.t0));
        CHECK(cand.anchor.x == doctest::Approx(cand.base.states.front().x));
    }
}

TEST_CASE("min separation of two stationary loiters is ball geometry") {
    SampledTrajectory a = pure_loiter({0, 0, 0}, LoiterDirection::Counterclockwise, kUnit, 0.0);
    SampledTrajectory b = pure_loiter({4, 0, 0}, LoiterDirection::Counterclockwise, kUnit, 0.0);
    // centers (0,1) and (4,1): distance 4, radii 1 each
    CHECK(min_separation(a, b, 0.0, 0.05) == doctest::Approx(2.0));
    CHECK(min_separation(a, a, 0.0, 0.05) == doctest::Approx(0.0));
}

TEST_CASE("min separation is symmetric") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 50; ++i) {
        BoundedSample a = random_bounded_trajectory(rng, kUnit, 0.0);
        BoundedSample b = random_bounded_trajectory(rng, kUnit, 0.0);
        for (auto& s : b.traj.states) {
            s.x += u(rng);
            s.y += u(rng);
        }
        b.traj.tail = make_loiter(b.traj.states.back(), b.traj.tail->direction, kUnit,
                                  b.traj.end_time());
        double ab = min_separation(a.traj, b.traj, 0.0, 0.05);
        double ba = min_separation(b.traj, a.traj, 0.0, 0.05);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    }
}

TEST_CASE("min separation brackets the fine-grid minimum on finite windows") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 60; ++i) {
        SampledTrajectory a =
            propagate({u(rng), u(rng), u(rng)}, {{0.4, 2.0}, {-0.8, 2.0}}, 0.05, 4.0, kUnit);
        SampledTrajectory b =
            propagate({u(rng), u(rng), u(rng)}, {{-0.3, 2.0}, {0.9, 2.0}}, 0.05, 4.0, kUnit);
        double grid_dt = 0.05;
        double coarse = min_separation(a, b, 0.0, grid_dt);
        double fine = brute_min_separation(a, b, 0.0, 4.0, grid_dt / 10.0);
        double margin = 0.5 * grid_dt * (a.speed_bound() + b.speed_bound());
        CHECK(coarse <= fine + 1e-12);
        CHECK(coarse >= std::max(0.0, fine - margin) - 1e-12);
    }
}

TEST_CASE("min separation rejects undefined windows") {
    SampledTrajectory a = propagate({0, 0, 0}, {{0.0, 1.0}}, 0.05, 1.0, kUnit);
    SampledTrajectory b = propagate({5, 0, 0}, {{0.0, 1.0}}, 0.05, 1.0, kUnit);
    CHECK_THROWS_AS(min_separation(a, b, 2.0, 0.05), std::invalid_argument);
}

TEST_CASE("overlapping orbit balls fall back to the phase test") {
    // two agents sharing one circle half a period apart never collide even
    // though their orbit balls coincide
    DubinsParams p{1.0, 1.0};
    LoiterOrbit base = make_loiter({0, 0, 0}, LoiterDirection::Counterclockwise, p, 0.0);
    SampledTrajectory a = pure_loiter({0, 0, 0}, LoiterDirection::Counterclockwise, p, 0.0);
    DubinsState opposite = orbit_state_at(base, base.period() / 2.0);
    SampledTrajectory b = pure_loiter(opposite, LoiterDirection::Counterclockwise, p, 0.0);

    double sep = min_separation(a, b, 0.0, 0.01);
    CHECK(sep > 1.9);  // diametrically opposed on a unit circle: distance 2
    CHECK(sep <= 2.0);
}

TEST_CASE("r-boundedness checks") {
    // zero-displacement prefix with a degenerate tail is bounded for any r
    SampledTrajectory still;
    still.t0 = 0.0;
    still.states = {{1, 1, 0}};
    still.tail = make_loiter({1, 1, 0}, LoiterDirection::Counterclockwise,
                             DubinsParams{1e-9, 1.0}, 0.0);
    CHECK(is_r_bounded(still, {1, 1}, 0.01, 0.0));

    // unit loiter centered on the anchor: bounded by 1, not by 0.9
    SampledTrajectory loop = pure_loiter({1, 0, std::numbers::pi / 2},
                                         LoiterDirection::Counterclockwise, kUnit, 0.0);
    CHECK(loop.tail->center.x == doctest::Approx(0.0));
    CHECK(loop.tail->center.y == doctest::Approx(0.0));
    CHECK_FALSE(is_r_bounded(loop, {0, 0}, 0.9, 0.0));
    CHECK(is_r_bounded(loop, {0, 0}, 1.0, 1e-12));

    SampledTrajectory tailless = propagate({0, 0, 0}, {{0.0, 1.0}}, 0.05, 1.0, kUnit);
    CHECK_THROWS_AS(is_r_bounded(tailless, {0, 0}, 5.0, 0.0), std::invalid_argument);
}

TEST_CASE("trace lines round-trip") {
    std::ostringstream os;
    write_trace_line(os, {1.25, -3.5, 2.0, 0.785398, -1.0});
    CHECK(os.str() == "1.250000 -3.500000 2.000000 0.785398 -1.000000\n");
    std::istringstream is(os.str());
    auto rows = read_trace(is);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].t == doctest::Approx(1.25));
    CHECK(rows[0].omega == doctest::Approx(-1.0));
}
