#include "r3r/dynamics.hpp"

namespace r3r {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kStraightOmega = 1e-12;  // below this an arc degenerates to a line
}  // namespace

double wrap_angle(double theta) {
    double w = std::remainder(theta, 2.0 * kPi);  // (-pi, pi], with -pi possible
    if (w <= -kPi) w = kPi;
    return w;
}

StateDerivative dubins_derivative(const DubinsState& s, double omega, const DubinsParams& p) {
    if (std::abs(omega) > p.omega_max * (1.0 + 1e-12)) {
        throw std::invalid_argument("dubins_derivative: |omega| exceeds omega_max");
    }
    return {p.v * std::cos(s.theta), p.v * std::sin(s.theta), omega};
}

DubinsState rk4_step(const DubinsState& s, double omega, double dt, const DubinsParams& p) {
    auto f = [&](const DubinsState& q) { return dubins_derivative(q, omega, p); };
    auto advance = [](const DubinsState& q, const StateDerivative& d, double h) {
        return DubinsState{q.x + d.dx * h, q.y + d.dy * h, q.theta + d.dtheta * h};
    };
    StateDerivative k1 = f(s);
    StateDerivative k2 = f(advance(s, k1, dt / 2.0));
    StateDerivative k3 = f(advance(s, k2, dt / 2.0));
    StateDerivative k4 = f(advance(s, k3, dt));
    DubinsState out{
        s.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
        s.y + dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy),
        s.theta + dt / 6.0 * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta)};
    out.theta = wrap_angle(out.theta);
    return out;
}

DubinsState arc_step(const DubinsState& s, double omega, double dt, const DubinsParams& p) {
    if (std::abs(omega) > p.omega_max * (1.0 + 1e-12)) {
        throw std::invalid_argument("arc_step: |omega| exceeds omega_max");
    }
    if (std::abs(omega) < kStraightOmega) {
        return {s.x + p.v * dt * std::cos(s.theta), s.y + p.v * dt * std::sin(s.theta), s.theta};
    }
    double r = p.v / omega;  // signed turning radius
    double th1 = s.theta + omega * dt;
    DubinsState out{s.x + r * (std::sin(th1) - std::sin(s.theta)),
                    s.y - r * (std::cos(th1) - std::cos(s.theta)), wrap_angle(th1)};
    return out;
}

LoiterOrbit make_loiter(const DubinsState& entry, LoiterDirection direction,
                        const DubinsParams& p, double entry_time) {
    double r = p.turn_radius();
    LoiterOrbit orbit;
    orbit.radius = r;
    orbit.direction = direction;
    orbit.phase_at_entry = entry.theta;
    orbit.entry_time = entry_time;
    orbit.angular_rate = p.omega_max;
    if (direction == LoiterDirection::Counterclockwise) {
        orbit.center = {entry.x - r * std::sin(entry.theta), entry.y + r * std::cos(entry.theta)};
    } else {
        orbit.center = {entry.x + r * std::sin(entry.theta), entry.y - r * std::cos(entry.theta)};
    }
    return orbit;
}

DubinsState orbit_state_at(const LoiterOrbit& orbit, double t) {
    if (t < orbit.entry_time - 1e-12) {
        throw std::invalid_argument("orbit_state_at: t precedes orbit entry");
    }
    double heading = orbit.phase_at_entry + orbit.signed_rate() * (t - orbit.entry_time);
    DubinsState s;
    if (orbit.direction == LoiterDirection::Counterclockwise) {
        s.x = orbit.center.x + orbit.radius * std::sin(heading);
        s.y = orbit.center.y - orbit.radius * std::cos(heading);
    } else {
        s.x = orbit.center.x - orbit.radius * std::sin(heading);
        s.y = orbit.center.y + orbit.radius * std::cos(heading);
    }
    s.theta = wrap_angle(heading);
    return s;
}

}  // namespace r3r
