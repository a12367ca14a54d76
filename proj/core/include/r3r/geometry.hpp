#pragma once

#include <cmath>
#include <stdexcept>

namespace r3r {

/// 2D point in meters. All protocol geometry is planar.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Point2() = default;
    constexpr Point2(double px, double py) : x(px), y(py) {}

    constexpr Point2 operator+(const Point2& r) const { return {x + r.x, y + r.y}; }
    constexpr Point2 operator-(const Point2& r) const { return {x - r.x, y - r.y}; }
    constexpr Point2 operator*(double s) const { return {x * s, y * s}; }

    double norm() const { return std::hypot(x, y); }
    constexpr double dot(const Point2& r) const { return x * r.x + y * r.y; }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

/// Closed ball B(center, radius), radius >= 0.
struct Ball {
    Point2 center;
    double radius = 0.0;

    Ball() = default;
    Ball(Point2 c, double r) : center(c), radius(r) {
        if (r < 0.0) throw std::invalid_argument("Ball: negative radius");
    }
};

double dist_point_point(const Point2& a, const Point2& b);

/// Set distance between two closed balls, clamped at zero when they overlap.
double dist_ball_ball(const Ball& a, const Ball& b);

/// Planning radius implied by a communication radius and collision radius:
/// r_plan = (r_comm - delta) / 3. Rejects r_comm <= delta.
double r3r_plan_radius(double r_comm, double delta);

/// True iff two r-bounded trajectories anchored at these points can never
/// come within delta of each other: ||a - b|| >= 2r + delta.
bool anchors_preclude_collision(const Point2& anchor_a, const Point2& anchor_b,
                                double r, double delta);

/// The radius triple every agent shares. Construction enforces the exact
/// relation r_comm = 3*r_plan + delta and delta < r_plan; the three values
/// are stored redundantly so call sites never re-derive them.
class R3RParams {
public:
    static R3RParams from_comm_radius(double r_comm, double delta);
    static R3RParams from_plan_radius(double r_plan, double delta);

    double delta() const { return delta_; }
    double r_plan() const { return r_plan_; }
    double r_comm() const { return r_comm_; }

private:
    R3RParams(double delta, double r_plan, double r_comm)
        : delta_(delta), r_plan_(r_plan), r_comm_(r_comm) {}

    double delta_;
    double r_plan_;
    double r_comm_;
};

}  // namespace r3r
