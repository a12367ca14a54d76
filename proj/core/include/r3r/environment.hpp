#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "r3r/dynamics.hpp"
#include "r3r/geometry.hpp"

namespace r3r {

/// Static world model: an occupancy grid plus an inflated copy whose free
/// cells define the safe set. Cell (0,0) sits at world origin, x right,
/// y up; a map file's first data row is the top row of the grid.
class OccupancyEnvironment {
public:
    OccupancyEnvironment(int width, int height, double resolution, double inflation = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    double inflation() const { return inflation_; }
    double world_width() const { return width_ * resolution_; }
    double world_height() const { return height_ * resolution_; }

    void set_occupied(int ix, int iy, bool occupied = true);
    bool occupied_raw(int ix, int iy) const;
    bool occupied_inflated(int ix, int iy) const;

    /// Re-derives the inflated grid with a new inflation radius (meters).
    void set_inflation(double inflation);

    /// True iff the closed disc B(p, margin) lies entirely in inflated-free
    /// cells. Any part outside the grid is unsafe.
    bool in_safe_set(const Point2& p, double margin) const;

    std::string save() const;

private:
    void reinflate() const;
    bool in_bounds(int ix, int iy) const { return ix >= 0 && ix < width_ && iy >= 0 && iy < height_; }

    int width_;
    int height_;
    double resolution_;
    double inflation_;
    std::vector<uint8_t> raw_;
    mutable std::vector<uint8_t> inflated_;
    mutable bool inflation_dirty_ = false;
};

/// Parses the map document format: header `W H RES`, then H rows of W glyphs,
/// '#' occupied and '.' free. Parse errors carry line/column.
OccupancyEnvironment load_map(const std::string& text, double inflation = 0.0);

struct AgentSpawn {
    DubinsState spawn;
    Point2 goal;
    double join_time = 0.0;
};

struct Scenario {
    OccupancyEnvironment env;
    std::vector<AgentSpawn> agents;
    R3RParams params;
    DubinsParams dyn;
    double duration = 0.0;
    uint64_t seed = 0;
    std::string name;
};

struct SwapSpec {
    int n = 8;
    double radius = 0.0;  // 0 = auto from the spawn-separation constraint
};

struct CityLikeSpec {
    int n = 16;
    double side = 100.0;
};

struct MapFileSpec {
    std::string path;
    int n = 8;
};

Scenario generate_swap_scenario(const SwapSpec& spec, const R3RParams& params,
                                const DubinsParams& dyn, uint64_t seed);
Scenario generate_city_scenario(const CityLikeSpec& spec, const R3RParams& params,
                                const DubinsParams& dyn, uint64_t seed);
Scenario generate_mapfile_scenario(const MapFileSpec& spec, const R3RParams& params,
                                   const DubinsParams& dyn, uint64_t seed);

/// An all-free arena of the given side length, used by swap and density runs.
OccupancyEnvironment make_empty_arena(double side, double resolution, double inflation);

/// Default static inflation: half the collision radius for the body disc plus
/// half again for clearance bookkeeping.
double default_inflation(double delta);

}  // namespace r3r
