#pragma once

#include <array>
#include <optional>
#include <vector>

#include "r3r/dynamics.hpp"
#include "r3r/trajectory.hpp"

namespace r3r {

/// Shortest bounded-curvature path between two poses: three segments, each a
/// max-rate turn (L/R) or a straight (S).
struct DubinsPath {
    DubinsState start;
    double rho = 1.0;                    // turning radius
    std::array<double, 3> seg_len{};     // meters
    std::array<int, 3> seg_turn{};       // +1 left, 0 straight, -1 right

    double length() const { return seg_len[0] + seg_len[1] + seg_len[2]; }
};

/// Minimum-length path over the six candidate words; empty only in the
/// degenerate rho <= 0 case.
std::optional<DubinsPath> dubins_shortest_path(const DubinsState& from, const DubinsState& to,
                                               double rho);

/// Pose after arc length s along the path, s in [0, length()].
DubinsState dubins_path_sample(const DubinsPath& path, double s);

/// The path as piecewise-constant omega segments for the given dynamics.
std::vector<ControlSegment> dubins_controls(const DubinsPath& path, const DubinsParams& p);

}  // namespace r3r
