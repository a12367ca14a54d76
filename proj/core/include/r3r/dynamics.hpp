#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "r3r/geometry.hpp"

namespace r3r {

/// Wrap an angle into (-pi, pi].
double wrap_angle(double theta);

struct DubinsState {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // wrapped to (-pi, pi]

    Point2 position() const { return {x, y}; }
};

/// Unicycle at fixed forward speed v with |omega| <= omega_max.
struct DubinsParams {
    double v = 1.0;
    double omega_max = 2.0;

    double turn_radius() const { return v / omega_max; }
    /// Period of a full max-rate circle.
    double loiter_period() const { return 2.0 * std::numbers::pi / omega_max; }
};

struct StateDerivative {
    double dx;
    double dy;
    double dtheta;
};

/// (v cos theta, v sin theta, omega). Rejects |omega| > omega_max.
StateDerivative dubins_derivative(const DubinsState& s, double omega, const DubinsParams& p);

/// One explicit RK4 step of the Dubins dynamics under constant omega.
DubinsState rk4_step(const DubinsState& s, double omega, double dt, const DubinsParams& p);

/// Exact constant-omega arc over dt (straight line when omega ~ 0).
DubinsState arc_step(const DubinsState& s, double omega, double dt, const DubinsParams& p);

enum class LoiterDirection { Counterclockwise, Clockwise };

/// The backup set: a max-rate circle the closed-loop backup controller keeps
/// the vehicle on forever. Entering state lies exactly on the circle; the
/// orbit is the tightest feasible one (radius v / omega_max).
struct LoiterOrbit {
    Point2 center;
    double radius = 0.0;
    LoiterDirection direction = LoiterDirection::Counterclockwise;
    double phase_at_entry = 0.0;   // heading at entry, radians
    double entry_time = 0.0;       // seconds
    double angular_rate = 0.0;     // magnitude, rad/s (omega_max of the owner)

    double signed_rate() const {
        return direction == LoiterDirection::Counterclockwise ? angular_rate : -angular_rate;
    }
    double period() const { return 2.0 * std::numbers::pi / angular_rate; }
    /// Tangential speed along the orbit (the owner's forward speed).
    double speed() const { return radius * angular_rate; }
    Ball bounding_ball() const { return Ball{center, radius}; }
};

LoiterOrbit make_loiter(const DubinsState& entry, LoiterDirection direction,
                        const DubinsParams& p, double entry_time);

/// Analytic closed-loop state on the orbit at absolute time t >= entry_time.
DubinsState orbit_state_at(const LoiterOrbit& orbit, double t);
inline DubinsState orbit_state_at(const LoiterOrbit& orbit, double t, const DubinsParams&) {
    return orbit_state_at(orbit, t);
}

}  // namespace r3r
