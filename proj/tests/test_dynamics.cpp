#include <doctest.h>

#include <numbers>
#include <random>

#include "r3r/dynamics.hpp"
#include "r3r/trajectory.hpp"

using namespace r3r;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("dubins derivative") {
    DubinsParams p{1.0, 1.0};
    auto d = dubins_derivative({0, 0, 0}, 0.0, p);
    CHECK(d.dx == doctest::Approx(1.0));
    CHECK(d.dy == doctest::Approx(0.0));
    CHECK(d.dtheta == doctest::Approx(0.0));

    d = dubins_derivative({0, 0, kPi / 2}, 0.0, p);
    CHECK(d.dx == doctest::Approx(0.0));
    CHECK(d.dy == doctest::Approx(1.0));

    d = dubins_derivative({0, 0, 0}, 1.0, p);
    CHECK(d.dx == doctest::Approx(1.0));
    CHECK(d.dtheta == doctest::Approx(1.0));

    CHECK_THROWS_AS(dubins_derivative({0, 0, 0}, 1.5, p), std::invalid_argument);
}

TEST_CASE("propagation closed forms") {
    DubinsParams p{1.0, 1.0};

    SampledTrajectory straight = propagate({0, 0, 0}, {{0.0, 2.0}}, 0.05, 2.0, p);
    CHECK(straight.states.back().x == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(straight.states.back().y == doctest::Approx(0.0).epsilon(1e-9));

    SampledTrajectory circle = propagate({0, 0, 0}, {{1.0, 2.0 * kPi}}, 0.05, 2.0 * kPi, p);
    CHECK(std::abs(circle.states.back().x) < 1e-6);
    CHECK(std::abs(circle.states.back().y) < 1e-6);

    SampledTrajectory half = propagate({0, 0, 0}, {{1.0, kPi}}, 0.05, kPi, p);
    CHECK(half.states.back().x == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(half.states.back().y == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::abs(wrap_angle(half.states.back().theta - kPi)) < 1e-6);
}

TEST_CASE("closed-form arc matches rk4 per step") {
    DubinsParams p{1.0, 1.0};
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> upos(-5.0, 5.0);
    std::uniform_real_distribution<double> uth(-kPi, kPi);
    std::uniform_real_distribution<double> uom(-1.0, 1.0);
    std::uniform_real_distribution<double> udt(0.001, 0.1);
    for (int i = 0; i < 1000; ++i) {
        DubinsState s{upos(rng), upos(rng), uth(rng)};
        double omega = uom(rng);
        double dt = udt(rng);
        DubinsState exact = arc_step(s, omega, dt, p);
        DubinsState rk = rk4_step(s, omega, dt, p);
        CHECK(std::hypot(exact.x - rk.x, exact.y - rk.y) < 1e-6);
    }
}

TEST_CASE("loiter construction") {
    DubinsParams p1{1.0, 1.0};
    LoiterOrbit ccw = make_loiter({0, 0, 0}, LoiterDirection::Counterclockwise, p1, 0.0);
    CHECK(ccw.center.x == doctest::Approx(0.0));
    CHECK(ccw.center.y == doctest::Approx(1.0));
    CHECK(ccw.radius == doctest::Approx(1.0));

    LoiterOrbit cw = make_loiter({0, 0, 0}, LoiterDirection::Clockwise, p1, 0.0);
    CHECK(cw.center.y == doctest::Approx(-1.0));

    DubinsParams p2{2.0, 1.0};
    LoiterOrbit shifted = make_loiter({5, 5, kPi / 2}, LoiterDirection::Counterclockwise, p2, 0.0);
    CHECK(shifted.center.x == doctest::Approx(3.0));
    CHECK(shifted.center.y == doctest::Approx(5.0));
    CHECK(shifted.radius == doctest::Approx(2.0));
}

TEST_CASE("orbit evaluation") {
    DubinsParams p{1.0, 1.0};
    LoiterOrbit orbit = make_loiter({0, 0, 0}, LoiterDirection::Counterclockwise, p, 3.0);

    DubinsState at_entry = orbit_state_at(orbit, 3.0);
    CHECK(at_entry.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(at_entry.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(at_entry.theta == doctest::Approx(0.0));

    DubinsState after_period = orbit_state_at(orbit, 3.0 + orbit.period());
    CHECK(std::abs(after_period.x) < 1e-9);
    CHECK(std::abs(after_period.y) < 1e-9);

    DubinsState quarter = orbit_state_at(orbit, 3.0 + orbit.period() / 4.0);
    CHECK(quarter.x == doctest::Approx(1.0));
    CHECK(quarter.y == doctest::Approx(1.0));
    CHECK(quarter.theta == doctest::Approx(kPi / 2));

    CHECK_THROWS_AS(orbit_state_at(orbit, 2.0), std::invalid_argument);
}

// the orbit set is invariant under its own closed loop, and every point of it
// sits exactly on the circle
TEST_CASE("orbit invariance") {
    DubinsParams p{1.3, 0.7};
    LoiterOrbit orbit = make_loiter({2, -1, 0.4}, LoiterDirection::Clockwise, p, 1.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ut(0.0, 40.0);
    for (int i = 0; i < 500; ++i) {
        double t = 1.0 + ut(rng);
        DubinsState s = orbit_state_at(orbit, t);
        CHECK(std::abs(dist_point_point(s.position(), orbit.center) - orbit.radius) < 1e-9);
    }
    // entering on the orbit keeps the closed-loop flow on the orbit
    DubinsState flow = orbit_state_at(orbit, 1.0);
    for (int k = 0; k < 200; ++k) {
        flow = arc_step(flow, orbit.signed_rate(), 0.05, p);
        CHECK(std::abs(dist_point_point(flow.position(), orbit.center) - orbit.radius) < 1e-7);
    }
}
