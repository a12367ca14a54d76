#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "r3r/dynamics.hpp"
#include "r3r/geometry.hpp"

namespace r3r {

class OccupancyEnvironment;

/// One piecewise-constant control segment of the Dubins input.
struct ControlSegment {
    double omega;
    double duration;
};

/// A trajectory stored as uniform time samples, optionally continued forever
/// by an analytic loiter tail. The sampled prefix covers [t0, end_time()];
/// with a tail the domain is [t0, inf). controls[k] labels the input active
/// at the start of step k.
struct SampledTrajectory {
    double t0 = 0.0;
    double dt = 0.05;
    std::vector<DubinsState> states;
    std::vector<double> controls;
    std::optional<LoiterOrbit> tail;

    double duration() const { return dt * static_cast<double>(controls.size()); }
    double end_time() const { return t0 + duration(); }
    bool has_tail() const { return tail.has_value(); }

    /// Tight upper bound on speed along the trajectory, from the data.
    double speed_bound() const;

    /// Checks the structural invariants (sizes, splice continuity). Throws on
    /// violation; used at construction seams, not in hot paths.
    void check_invariants() const;
};

DubinsState sample_at(const SampledTrajectory& traj, double t);

/// Control label active at time t (signed loiter rate inside the tail).
double control_at(const SampledTrajectory& traj, double t);

/// Integrates a piecewise-constant control schedule with exact constant-omega
/// arcs, sampling uniformly so the horizon lands exactly on the last sample.
/// The schedule must cover the horizon. No tail is attached.
SampledTrajectory propagate(const DubinsState& start, const std::vector<ControlSegment>& schedule,
                            double dt, double horizon, const DubinsParams& p, double t0 = 0.0);

/// Nominal prefix up to a switch time spliced onto a loiter tail.
struct CandidateTrajectory {
    SampledTrajectory base;   // tail always present
    double switch_time = 0.0; // offset from base.t0
    Point2 anchor;            // position at anchor_time
    double anchor_time = 0.0; // == base.t0

    const LoiterOrbit& orbit() const { return *base.tail; }
};

/// Direction whose orbit best satisfies the plan-radius bound and, when an
/// environment is given, static clearance. Ties break counterclockwise.
LoiterDirection choose_loiter_direction(const DubinsState& entry, const Point2& anchor,
                                        double r_plan, const DubinsParams& p,
                                        const OccupancyEnvironment* env = nullptr);

CandidateTrajectory compose_candidate(const SampledTrajectory& nominal, double switch_time,
                                      const DubinsParams& p);
CandidateTrajectory compose_candidate(const SampledTrajectory& nominal, double switch_time,
                                      const DubinsParams& p, LoiterDirection direction);

/// Conservative lower bound on inf_{t >= from_t} ||p_a(t) - p_b(t)||, from
/// grid sampling with an inter-sample speed margin plus analytic treatment of
/// the periodic tails (one common period when the orbit balls overlap, the
/// ball-to-ball distance otherwise). Clamped at zero.
double min_separation(const SampledTrajectory& a, const SampledTrajectory& b, double from_t,
                      double grid_dt);

struct SeparationDetail {
    double lower_bound = 0.0;
    double min_sampled = 0.0;  // smallest raw sampled distance
    double argmin_time = 0.0;
};

SeparationDetail min_separation_detail(const SampledTrajectory& a, const SampledTrajectory& b,
                                       double from_t, double grid_dt);

/// True iff every prefix sample stays within r + tol of the anchor and the
/// tail's circumscribing ball does too. The tail is checked exactly, never by
/// sampling; trajectories without a tail are rejected.
bool is_r_bounded(const SampledTrajectory& traj, const Point2& anchor, double r, double tol);

/// Largest displacement from the anchor attained anywhere on the trajectory
/// (sampled prefix plus exact orbit ball).
double max_anchor_displacement(const SampledTrajectory& traj, const Point2& anchor);

/// Trace record: one line `t x y theta omega`, 6-decimal fixed point.
struct TraceSample {
    double t;
    double x;
    double y;
    double theta;
    double omega;
};

void write_trace_line(std::ostream& os, const TraceSample& s);
std::vector<TraceSample> read_trace(std::istream& is);

}  // namespace r3r
