#include <doctest.h>

#include <numbers>
#include <random>

#include "r3r/dubins_path.hpp"

using namespace r3r;

// the connector must actually land on the target pose when replayed through
// the same arc integrator the planner uses
TEST_CASE("dubins connections land on the target pose") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> upos(-6.0, 6.0);
    std::uniform_real_distribution<double> uth(-std::numbers::pi, std::numbers::pi);
    DubinsParams p{1.0, 2.0};
    for (int i = 0; i < 500; ++i) {
        DubinsState from{upos(rng), upos(rng), uth(rng)};
        DubinsState to{upos(rng), upos(rng), uth(rng)};
        auto path = dubins_shortest_path(from, to, p.turn_radius());
        REQUIRE(path.has_value());
        DubinsState end = dubins_path_sample(*path, path->length());
        CHECK(std::hypot(end.x - to.x, end.y - to.y) < 1e-6);
        CHECK(std::abs(wrap_angle(end.theta - to.theta)) < 1e-6);

        // control replay agrees with the geometric sampler
        DubinsState replay = from;
        for (const ControlSegment& seg : dubins_controls(*path, p)) {
            replay = arc_step(replay, seg.omega, seg.duration, p);
        }
        CHECK(std::hypot(replay.x - to.x, replay.y - to.y) < 1e-6);
    }
}

TEST_CASE("dubins length is at least the straight-line distance") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> upos(-5.0, 5.0);
    std::uniform_real_distribution<double> uth(-std::numbers::pi, std::numbers::pi);
    for (int i = 0; i < 200; ++i) {
        DubinsState from{upos(rng), upos(rng), uth(rng)};
        DubinsState to{upos(rng), upos(rng), uth(rng)};
        auto path = dubins_shortest_path(from, to, 0.5);
        REQUIRE(path.has_value());
        CHECK(path->length() >= std::hypot(to.x - from.x, to.y - from.y) - 1e-9);
    }
}

TEST_CASE("straight-ahead connection is a straight line") {
    auto path = dubins_shortest_path({0, 0, 0}, {5, 0, 0}, 1.0);
    REQUIRE(path.has_value());
    CHECK(path->length() == doctest::Approx(5.0).epsilon(1e-9));
}
