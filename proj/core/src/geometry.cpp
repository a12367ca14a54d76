#include "r3r/geometry.hpp"

#include <algorithm>

namespace r3r {

double dist_point_point(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double dist_ball_ball(const Ball& a, const Ball& b) {
    double d = dist_point_point(a.center, b.center) - a.radius - b.radius;
    return std::max(0.0, d);
}

double r3r_plan_radius(double r_comm, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("r3r_plan_radius: delta must be > 0");
    if (!(r_comm > delta)) {
        throw std::invalid_argument("r3r_plan_radius: r_comm must exceed delta");
    }
    return (r_comm - delta) / 3.0;
}

bool anchors_preclude_collision(const Point2& anchor_a, const Point2& anchor_b,
                                double r, double delta) {
    if (!(r > delta && delta > 0.0)) {
        throw std::invalid_argument("anchors_preclude_collision: need r > delta > 0");
    }
    return dist_point_point(anchor_a, anchor_b) >= 2.0 * r + delta;
}

R3RParams R3RParams::from_comm_radius(double r_comm, double delta) {
    double r_plan = r3r_plan_radius(r_comm, delta);
    if (!(delta < r_plan)) {
        throw std::invalid_argument("R3RParams: delta must be smaller than r_plan");
    }
    return R3RParams(delta, r_plan, r_comm);
}

R3RParams R3RParams::from_plan_radius(double r_plan, double delta) {
    if (!(r_plan > 0.0 && delta > 0.0)) {
        throw std::invalid_argument("R3RParams: radii must be positive");
    }
    if (!(delta < r_plan)) {
        throw std::invalid_argument("R3RParams: delta must be smaller than r_plan");
    }
    return R3RParams(delta, r_plan, 3.0 * r_plan + delta);
}

}  // namespace r3r
