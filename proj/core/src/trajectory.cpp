#include "r3r/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "r3r/environment.hpp"

namespace r3r {

namespace {
constexpr double kSpliceTol = 1e-6;

double lerp_angle(double a, double b, double frac) {
    return a + frac * wrap_angle(b - a);
}
}  // namespace

double SampledTrajectory::speed_bound() const {
    double v = 0.0;
    for (size_t i = 0; i + 1 < states.size(); ++i) {
        double step = dist_point_point(states[i + 1].position(), states[i].position());
        v = std::max(v, step / dt);
    }
    if (tail) v = std::max(v, tail->speed());
    return v;
}

void SampledTrajectory::check_invariants() const {
    if (states.empty()) throw std::logic_error("SampledTrajectory: no states");
    if (states.size() != controls.size() + 1) {
        throw std::logic_error("SampledTrajectory: states.size() != controls.size() + 1");
    }
    if (!(dt > 0.0)) throw std::logic_error("SampledTrajectory: dt must be > 0");
    if (tail) {
        if (std::abs(tail->entry_time - end_time()) > 1e-9) {
            throw std::logic_error("SampledTrajectory: tail entry time off the prefix end");
        }
        DubinsState on_orbit = orbit_state_at(*tail, tail->entry_time);
        double gap = dist_point_point(on_orbit.position(), states.back().position());
        if (gap > kSpliceTol) {
            throw std::logic_error("SampledTrajectory: splice discontinuity at tail");
        }
    }
}

DubinsState sample_at(const SampledTrajectory& traj, double t) {
    if (t < traj.t0 - 1e-9) throw std::invalid_argument("sample_at: t before trajectory start");
    double offset = std::max(0.0, t - traj.t0);
    double end = traj.duration();
    if (offset >= end) {
        if (traj.tail) return orbit_state_at(*traj.tail, traj.t0 + offset);
        if (offset <= end + 1e-9) return traj.states.back();
        throw std::invalid_argument("sample_at: t beyond finite trajectory without tail");
    }
    double pos = offset / traj.dt;
    auto idx = static_cast<size_t>(pos);
    double frac = pos - static_cast<double>(idx);
    if (idx + 1 >= traj.states.size()) return traj.states.back();
    if (frac < 1e-12) return traj.states[idx];
    const DubinsState& a = traj.states[idx];
    const DubinsState& b = traj.states[idx + 1];
    return {a.x + frac * (b.x - a.x), a.y + frac * (b.y - a.y),
            wrap_angle(lerp_angle(a.theta, b.theta, frac))};
}

double control_at(const SampledTrajectory& traj, double t) {
    double offset = t - traj.t0;
    double end = traj.duration();
    if (offset >= end) {
        if (traj.tail) return traj.tail->signed_rate();
        return traj.controls.empty() ? 0.0 : traj.controls.back();
    }
    auto idx = static_cast<size_t>(std::max(0.0, offset) / traj.dt);
    idx = std::min(idx, traj.controls.size() - 1);
    return traj.controls[idx];
}

SampledTrajectory propagate(const DubinsState& start, const std::vector<ControlSegment>& schedule,
                            double dt, double horizon, const DubinsParams& p, double t0) {
    if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be > 0");
    if (horizon < 0.0) throw std::invalid_argument("propagate: negative horizon");
    double total = 0.0;
    for (const auto& seg : schedule) total += seg.duration;
    if (total + 1e-9 < horizon) throw std::invalid_argument("propagate: schedule shorter than horizon");

    SampledTrajectory traj;
    traj.t0 = t0;
    auto n = horizon > 0.0 ? std::max<size_t>(1, static_cast<size_t>(std::llround(horizon / dt)))
                           : 0;
    traj.dt = n > 0 ? horizon / static_cast<double>(n) : dt;
    traj.states.reserve(n + 1);
    traj.controls.reserve(n);

    DubinsState s = start;
    s.theta = wrap_angle(s.theta);
    traj.states.push_back(s);

    size_t seg_idx = 0;
    double seg_left = schedule.empty() ? 0.0 : schedule[0].duration;
    for (size_t k = 0; k < n; ++k) {
        double step_left = traj.dt;
        // control label: whatever segment is active when the step begins
        while (seg_idx + 1 < schedule.size() && seg_left <= 1e-12) {
            ++seg_idx;
            seg_left = schedule[seg_idx].duration;
        }
        traj.controls.push_back(schedule.empty() ? 0.0 : schedule[seg_idx].omega);
        while (step_left > 1e-12) {
            if (seg_left <= 1e-12 && seg_idx + 1 < schedule.size()) {
                ++seg_idx;
                seg_left = schedule[seg_idx].duration;
                continue;
            }
            double h = schedule.empty() ? step_left : std::min(step_left, seg_left);
            if (h <= 0.0) h = step_left;  // schedule exhausted by rounding; hold last omega
            double omega = schedule.empty() ? 0.0 : schedule[seg_idx].omega;
            s = arc_step(s, omega, h, p);
            step_left -= h;
            seg_left -= h;
        }
        traj.states.push_back(s);
    }
    return traj;
}

LoiterDirection choose_loiter_direction(const DubinsState& entry, const Point2& anchor,
                                        double r_plan, const DubinsParams& p,
                                        const OccupancyEnvironment* env) {
    auto score = [&](LoiterDirection dir) {
        LoiterOrbit orbit = make_loiter(entry, dir, p, 0.0);
        double reach = dist_point_point(anchor, orbit.center) + orbit.radius;
        double plan_excess = std::max(0.0, reach - r_plan);
        bool blocked = env != nullptr && !env->in_safe_set(orbit.center, orbit.radius);
        return std::pair<double, double>(blocked ? 1.0 : 0.0, plan_excess);
    };
    auto ccw = score(LoiterDirection::Counterclockwise);
    auto cw = score(LoiterDirection::Clockwise);
    return cw < ccw ? LoiterDirection::Clockwise : LoiterDirection::Counterclockwise;
}

CandidateTrajectory compose_candidate(const SampledTrajectory& nominal, double switch_time,
                                      const DubinsParams& p) {
    Point2 anchor = nominal.states.front().position();
    size_t idx = std::min<size_t>(nominal.controls.size(),
                                  static_cast<size_t>(std::llround(
                                      std::max(0.0, switch_time) / nominal.dt)));
    // anchor-ball fit only; callers with an environment pick the direction themselves
    double best = -1.0;
    LoiterDirection pick = LoiterDirection::Counterclockwise;
    for (LoiterDirection d : {LoiterDirection::Counterclockwise, LoiterDirection::Clockwise}) {
        LoiterOrbit orbit = make_loiter(nominal.states[idx], d, p, 0.0);
        double reach = dist_point_point(anchor, orbit.center) + orbit.radius;
        if (best < 0.0 || reach < best - 1e-12) {
            best = reach;
            pick = d;
        }
    }
    return compose_candidate(nominal, switch_time, p, pick);
}

CandidateTrajectory compose_candidate(const SampledTrajectory& nominal, double switch_time,
                                      const DubinsParams& p, LoiterDirection direction) {
    if (nominal.states.empty()) throw std::invalid_argument("compose_candidate: empty nominal");
    if (switch_time < -1e-9 || switch_time > nominal.duration() + 1e-9) {
        throw std::invalid_argument("compose_candidate: switch time outside nominal horizon");
    }
    size_t idx = std::min<size_t>(nominal.controls.size(),
                                  static_cast<size_t>(std::llround(
                                      std::max(0.0, switch_time) / nominal.dt)));

    CandidateTrajectory cand;
    cand.base.t0 = nominal.t0;
    cand.base.dt = nominal.dt;
    cand.base.states.assign(nominal.states.begin(), nominal.states.begin() + idx + 1);
    cand.base.controls.assign(nominal.controls.begin(), nominal.controls.begin() + idx);
    double entry_time = nominal.t0 + static_cast<double>(idx) * nominal.dt;
    cand.base.tail = make_loiter(nominal.states[idx], direction, p, entry_time);
    cand.switch_time = static_cast<double>(idx) * nominal.dt;
    cand.anchor = nominal.states.front().position();
    cand.anchor_time = nominal.t0;
    cand.base.check_invariants();
    return cand;
}

namespace {

struct Window {
    double begin;
    double end;      // end of the sampled comparison window
    bool tails;      // both trajectories continue periodically past `end`
};

Window comparison_window(const SampledTrajectory& a, const SampledTrajectory& b, double from_t) {
    bool both_tails = a.has_tail() && b.has_tail();
    double fin;
    if (both_tails) {
        fin = std::max(a.end_time(), b.end_time());
    } else if (a.has_tail()) {
        fin = b.end_time();
    } else if (b.has_tail()) {
        fin = a.end_time();
    } else {
        fin = std::min(a.end_time(), b.end_time());
    }
    if (from_t < std::max(a.t0, b.t0) - 1e-9 || from_t > fin + 1e-9) {
        throw std::invalid_argument("min_separation: undefined comparison window");
    }
    return {from_t, std::max(from_t, fin), both_tails};
}

/// Common period of the two orbits, if one exists within a small integer cap.
std::optional<double> common_period(const LoiterOrbit& a, const LoiterOrbit& b) {
    double ta = a.period();
    double tb = b.period();
    constexpr int kCap = 16;
    for (int m = 1; m <= kCap; ++m) {
        for (int n = 1; n <= kCap; ++n) {
            if (std::abs(m * ta - n * tb) < 1e-9 * std::max(ta, tb)) {
                return m * ta;
            }
        }
    }
    return std::nullopt;
}

}  // namespace

SeparationDetail min_separation_detail(const SampledTrajectory& a, const SampledTrajectory& b,
                                       double from_t, double grid_dt) {
    if (!(grid_dt > 0.0)) throw std::invalid_argument("min_separation: grid_dt must be > 0");
    Window w = comparison_window(a, b, from_t);
    double margin = 0.5 * grid_dt * (a.speed_bound() + b.speed_bound());

    SeparationDetail out;
    double raw_min = std::numeric_limits<double>::infinity();
    double raw_argmin = w.begin;
    auto scan = [&](double begin, double end) {
        auto steps = static_cast<size_t>(std::ceil((end - begin) / grid_dt - 1e-12));
        for (size_t k = 0; k <= steps; ++k) {
            double t = std::min(end, begin + static_cast<double>(k) * grid_dt);
            double d = dist_point_point(sample_at(a, t).position(), sample_at(b, t).position());
            if (d < raw_min) {
                raw_min = d;
                raw_argmin = t;
            }
        }
    };
    scan(w.begin, w.end);
    double bound = raw_min - margin;

    if (w.tails) {
        const LoiterOrbit& oa = *a.tail;
        const LoiterOrbit& ob = *b.tail;
        double ball_bound = dist_ball_ball(oa.bounding_ball(), ob.bounding_ball());
        double tail_bound = ball_bound;
        if (ball_bound <= 0.0) {
            // overlapping orbit balls: only a phase argument can separate them
            if (auto period = common_period(oa, ob)) {
                scan(w.end, w.end + *period);   // one common period covers all later t
                tail_bound = raw_min - margin;  // raw_min now spans prefix + tail window
            } else {
                tail_bound = 0.0;  // incommensurate phases: conservatively fail
            }
        }
        bound = std::min(raw_min - margin, tail_bound);
    }

    out.lower_bound = std::max(0.0, bound);
    out.min_sampled = raw_min;
    out.argmin_time = raw_argmin;
    return out;
}

double min_separation(const SampledTrajectory& a, const SampledTrajectory& b, double from_t,
                      double grid_dt) {
    return min_separation_detail(a, b, from_t, grid_dt).lower_bound;
}

bool is_r_bounded(const SampledTrajectory& traj, const Point2& anchor, double r, double tol) {
    if (!traj.has_tail()) {
        throw std::invalid_argument("is_r_bounded: trajectory lacks an infinite tail");
    }
    for (const auto& s : traj.states) {
        if (dist_point_point(s.position(), anchor) > r + tol) return false;
    }
    const LoiterOrbit& orbit = *traj.tail;
    double reach = dist_point_point(anchor, orbit.center) + orbit.radius;
    return reach <= r + tol;
}

double max_anchor_displacement(const SampledTrajectory& traj, const Point2& anchor) {
    double worst = 0.0;
    for (const auto& s : traj.states) {
        worst = std::max(worst, dist_point_point(s.position(), anchor));
    }
    if (traj.tail) {
        worst = std::max(worst,
                         dist_point_point(anchor, traj.tail->center) + traj.tail->radius);
    }
    return worst;
}

void write_trace_line(std::ostream& os, const TraceSample& s) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f %.6f %.6f\n", s.t, s.x, s.y, s.theta, s.omega);
    os << buf;
}

std::vector<TraceSample> read_trace(std::istream& is) {
    std::vector<TraceSample> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        TraceSample s{};
        std::istringstream ls(line);
        if (!(ls >> s.t >> s.x >> s.y >> s.theta >> s.omega)) {
            throw std::runtime_error("read_trace: malformed line: " + line);
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace r3r
