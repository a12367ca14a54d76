#include <doctest.h>

#include <random>

#include "r3r/geometry.hpp"
#include "support/oracles.hpp"

using namespace r3r;
using namespace r3r::testing;

TEST_CASE("point distance") {
    CHECK(dist_point_point({0, 0}, {3, 4}) == doctest::Approx(5.0));
    CHECK(dist_point_point({1, 1}, {1, 1}) == doctest::Approx(0.0));
    CHECK(dist_point_point({0, 0}, {1, 1}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("ball distance clamps and is symmetric") {
    Ball a{{0, 0}, 1.0};
    Ball b{{4, 0}, 1.0};
    CHECK(dist_ball_ball(a, b) == doctest::Approx(2.0));
    CHECK(dist_ball_ball(Ball{{0, 0}, 2.0}, Ball{{1, 0}, 2.0}) == doctest::Approx(0.0));
    CHECK(dist_ball_ball(Ball{{0, 0}, 1.0}, Ball{{3, 4}, 1.0}) == doctest::Approx(3.0));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::uniform_real_distribution<double> ur(0.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        Ball x{{u(rng), u(rng)}, ur(rng)};
        Ball y{{u(rng), u(rng)}, ur(rng)};
        CHECK(dist_ball_ball(x, y) == doctest::Approx(dist_ball_ball(y, x)));
    }
}

TEST_CASE("plan radius from comm radius") {
    CHECK(r3r_plan_radius(16.0, 0.5) == doctest::Approx(5.166666666666667).epsilon(1e-12));
    CHECK(r3r_plan_radius(3.5, 0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(r3r_plan_radius(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("R3RParams stores the exact relation") {
    R3RParams p = R3RParams::from_comm_radius(16.0, 0.5);
    CHECK(p.r_comm() == doctest::Approx(3.0 * p.r_plan() + p.delta()).epsilon(1e-15));
    CHECK(p.delta() < p.r_plan());
    CHECK_THROWS(R3RParams::from_comm_radius(1.0, 0.5));  // delta !< r_plan
    R3RParams q = R3RParams::from_plan_radius(5.0, 0.5);
    CHECK(q.r_comm() == doctest::Approx(15.5));
}

TEST_CASE("anchor separation test at the boundary") {
    CHECK(anchors_preclude_collision({0, 0}, {2.5, 0}, 1.0, 0.5));
    CHECK_FALSE(anchors_preclude_collision({0, 0}, {2.49, 0}, 1.0, 0.5));
}

// randomized bounded trajectories whose anchors clear 2r + delta never come
// within delta of each other; the dense oracle is the referee
TEST_CASE("bounded trajectories with cleared anchors stay separated") {
    const DubinsParams dyn{1.0, 1.0};
    const double delta = 0.5;
    std::mt19937_64 rng(20240501);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    for (int trial = 0; trial < 500; ++trial) {
        BoundedSample a = random_bounded_trajectory(rng, dyn, 0.0);
        BoundedSample b = random_bounded_trajectory(rng, dyn, u01(rng) * 3.0);
        double r = std::max({a.tight_radius, b.tight_radius, delta * 1.01});

        double sep = 2.0 * r + delta + u01(rng) * 2.0;
        double ang = u01(rng) * 6.28;
        Point2 offset{sep * std::cos(ang), sep * std::sin(ang)};
        for (auto& s : b.traj.states) {
            s.x += offset.x;
            s.y += offset.y;
        }
        b.traj.tail->center.x += offset.x;
        b.traj.tail->center.y += offset.y;

        Point2 pa = a.traj.states.front().position();
        Point2 pb = b.traj.states.front().position();
        REQUIRE(anchors_preclude_collision(pa, pb, r, delta));

        double t2 = std::max(a.traj.t0, b.traj.t0);
        double horizon = std::max(a.traj.end_time(), b.traj.end_time()) +
                         2.0 * a.traj.tail->period();
        double dt = (horizon - t2) * 1e-3;
        CHECK(brute_min_separation(a.traj, b.traj, t2, horizon, dt) >= delta);
    }
}

// contrapositive: whenever a sampled collision happens at t >= t2, the agents
// were within 3r + delta of each other at t2
TEST_CASE("colliding bounded trajectories were close at the later start") {
    const DubinsParams dyn{1.0, 1.0};
    const double delta = 0.5;
    std::mt19937_64 rng(987654);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    int collisions = 0;
    for (int trial = 0; trial < 2000 && collisions < 300; ++trial) {
        BoundedSample a = random_bounded_trajectory(rng, dyn, 0.0);
        BoundedSample b = random_bounded_trajectory(rng, dyn, u01(rng) * 2.0);
        double r = std::max({a.tight_radius, b.tight_radius, delta * 1.01});

        // anchors placed close so collisions actually occur
        double sep = u01(rng) * (2.0 * r + delta) * 0.6;
        double ang = u01(rng) * 6.28;
        for (auto& s : b.traj.states) {
            s.x += sep * std::cos(ang);
            s.y += sep * std::sin(ang);
        }
        b.traj.tail->center.x += sep * std::cos(ang);
        b.traj.tail->center.y += sep * std::sin(ang);

        double t2 = std::max(a.traj.t0, b.traj.t0);
        double horizon = std::max(a.traj.end_time(), b.traj.end_time()) +
                         2.0 * a.traj.tail->period();
        double dt = (horizon - t2) * 1e-3;
        if (brute_min_separation(a.traj, b.traj, t2, horizon, dt) < delta) {
            collisions += 1;
            double gap_at_t2 =
                dist_point_point(sample_at(a.traj, t2).position(),
                                 sample_at(b.traj, t2).position());
            CHECK(gap_at_t2 < 3.0 * r + delta);
        }
    }
    CHECK(collisions > 50);  // the construction must actually exercise the claim
}
