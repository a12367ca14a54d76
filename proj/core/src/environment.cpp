#include "r3r/environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace r3r {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

OccupancyEnvironment::OccupancyEnvironment(int width, int height, double resolution,
                                           double inflation)
    : width_(width), height_(height), resolution_(resolution), inflation_(inflation) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("OccupancyEnvironment: empty grid");
    if (!(resolution > 0.0)) throw std::invalid_argument("OccupancyEnvironment: bad resolution");
    raw_.assign(static_cast<size_t>(width) * height, 0);
    inflated_ = raw_;
}

void OccupancyEnvironment::set_occupied(int ix, int iy, bool occupied) {
    if (!in_bounds(ix, iy)) throw std::out_of_range("set_occupied: cell outside grid");
    raw_[static_cast<size_t>(iy) * width_ + ix] = occupied ? 1 : 0;
    inflation_dirty_ = true;
}

bool OccupancyEnvironment::occupied_raw(int ix, int iy) const {
    if (!in_bounds(ix, iy)) return true;
    return raw_[static_cast<size_t>(iy) * width_ + ix] != 0;
}

bool OccupancyEnvironment::occupied_inflated(int ix, int iy) const {
    if (!in_bounds(ix, iy)) return true;
    if (inflation_dirty_) reinflate();
    return inflated_[static_cast<size_t>(iy) * width_ + ix] != 0;
}

void OccupancyEnvironment::set_inflation(double inflation) {
    if (inflation < 0.0) throw std::invalid_argument("set_inflation: negative inflation");
    inflation_ = inflation;
    inflation_dirty_ = true;
}

void OccupancyEnvironment::reinflate() const {
    inflation_dirty_ = false;
    inflated_ = raw_;
    if (inflation_ <= 0.0) return;
    int reach = static_cast<int>(std::ceil(inflation_ / resolution_));
    double r2 = inflation_ * inflation_;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            if (raw_[static_cast<size_t>(y) * width_ + x] == 0) continue;
            int x0 = std::max(0, x - reach), x1 = std::min(width_ - 1, x + reach);
            int y0 = std::max(0, y - reach), y1 = std::min(height_ - 1, y + reach);
            for (int ny = y0; ny <= y1; ++ny) {
                for (int nx = x0; nx <= x1; ++nx) {
                    double dx = (nx - x) * resolution_;
                    double dy = (ny - y) * resolution_;
                    if (dx * dx + dy * dy <= r2) {
                        inflated_[static_cast<size_t>(ny) * width_ + nx] = 1;
                    }
                }
            }
        }
    }
}

bool OccupancyEnvironment::in_safe_set(const Point2& p, double margin) const {
    if (inflation_dirty_) reinflate();
    if (margin < 0.0) margin = 0.0;
    if (p.x - margin < 0.0 || p.y - margin < 0.0 || p.x + margin > world_width() ||
        p.y + margin > world_height()) {
        return false;
    }
    int x0 = std::max(0, static_cast<int>(std::floor((p.x - margin) / resolution_)));
    int x1 = std::min(width_ - 1, static_cast<int>(std::floor((p.x + margin) / resolution_)));
    int y0 = std::max(0, static_cast<int>(std::floor((p.y - margin) / resolution_)));
    int y1 = std::min(height_ - 1, static_cast<int>(std::floor((p.y + margin) / resolution_)));
    double m2 = margin * margin;
    for (int iy = y0; iy <= y1; ++iy) {
        for (int ix = x0; ix <= x1; ++ix) {
            if (!occupied_inflated(ix, iy)) continue;
            // distance from p to the cell rectangle
            double cx0 = ix * resolution_, cx1 = cx0 + resolution_;
            double cy0 = iy * resolution_, cy1 = cy0 + resolution_;
            double dx = std::max({cx0 - p.x, 0.0, p.x - cx1});
            double dy = std::max({cy0 - p.y, 0.0, p.y - cy1});
            if (dx * dx + dy * dy <= m2) return false;
        }
    }
    return true;
}

std::string OccupancyEnvironment::save() const {
    std::ostringstream os;
    os << width_ << ' ' << height_ << ' ' << resolution_ << '\n';
    for (int iy = height_ - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < width_; ++ix) {
            os << (raw_[static_cast<size_t>(iy) * width_ + ix] ? '#' : '.');
        }
        os << '\n';
    }
    return os.str();
}

OccupancyEnvironment load_map(const std::string& text, double inflation) {
    std::istringstream is(text);
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("map parse error at line 1: empty document");
    std::istringstream hs(header);
    int w = 0, h = 0;
    double res = 0.0;
    if (!(hs >> w >> h >> res) || w <= 0 || h <= 0 || !(res > 0.0)) {
        throw std::runtime_error("map parse error at line 1: malformed header (want `W H RES`)");
    }
    OccupancyEnvironment env(w, h, res, 0.0);
    std::string row;
    for (int r = 0; r < h; ++r) {
        if (!std::getline(is, row)) {
            throw std::runtime_error("map parse error at line " + std::to_string(r + 2) +
                                     ": missing row");
        }
        while (!row.empty() && (row.back() == '\r' || row.back() == ' ')) row.pop_back();
        if (static_cast<int>(row.size()) != w) {
            throw std::runtime_error("map parse error at line " + std::to_string(r + 2) +
                                     ": ragged row (got " + std::to_string(row.size()) +
                                     " glyphs, want " + std::to_string(w) + ")");
        }
        for (int c = 0; c < w; ++c) {
            char g = row[static_cast<size_t>(c)];
            if (g == '#') {
                env.set_occupied(c, h - 1 - r, true);
            } else if (g != '.') {
                throw std::runtime_error("map parse error at line " + std::to_string(r + 2) +
                                         ", column " + std::to_string(c + 1) +
                                         ": unknown glyph '" + std::string(1, g) + "'");
            }
        }
    }
    env.set_inflation(inflation);
    return env;
}

double default_inflation(double delta) { return delta; }

OccupancyEnvironment make_empty_arena(double side, double resolution, double inflation) {
    int cells = std::max(1, static_cast<int>(std::ceil(side / resolution)));
    return OccupancyEnvironment(cells, cells, resolution, inflation);
}

namespace {

/// Rejection-samples a pose set with pairwise spawn separation >= min_sep.
std::vector<AgentSpawn> sample_spawns(const OccupancyEnvironment& env, int n, double min_sep,
                                      double spawn_clear, double goal_clear, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(0.0, env.world_width());
    std::uniform_real_distribution<double> uy(0.0, env.world_height());
    std::vector<AgentSpawn> out;
    constexpr int kMaxTries = 10000;
    for (int i = 0; i < n; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxTries && !placed; ++attempt) {
            Point2 p{ux(rng), uy(rng)};
            if (!env.in_safe_set(p, spawn_clear)) continue;
            bool clash = false;
            for (const auto& other : out) {
                if (dist_point_point(p, other.spawn.position()) < min_sep) {
                    clash = true;
                    break;
                }
            }
            if (clash) continue;
            Point2 g;
            bool goal_ok = false;
            for (int gt = 0; gt < kMaxTries && !goal_ok; ++gt) {
                g = {ux(rng), uy(rng)};
                goal_ok = env.in_safe_set(g, goal_clear);
            }
            if (!goal_ok) continue;
            AgentSpawn a;
            a.spawn = {p.x, p.y, wrap_angle(std::atan2(g.y - p.y, g.x - p.x))};
            a.goal = g;
            out.push_back(a);
            placed = true;
        }
        if (!placed) {
            throw std::runtime_error("scenario generation: spawn separation unsatisfiable after " +
                                     std::to_string(kMaxTries) + " tries");
        }
    }
    return out;
}

}  // namespace

Scenario generate_swap_scenario(const SwapSpec& spec, const R3RParams& params,
                                const DubinsParams& dyn, uint64_t seed) {
    if (spec.n < 1) throw std::invalid_argument("generate_swap_scenario: n must be >= 1");
    double min_sep = 2.0 * params.r_plan() + params.delta();
    double radius = spec.radius;
    if (radius <= 0.0) {
        double needed = spec.n > 1 ? min_sep / (2.0 * std::sin(std::numbers::pi / spec.n)) : 1.0;
        radius = std::max(10.0, needed * 1.05);
    }
    double side = 2.0 * (radius + params.r_plan() + 2.0);
    double inflation = default_inflation(params.delta());
    Scenario sc{make_empty_arena(side, 0.5, inflation), {}, params, dyn, 0.0, seed, "swap"};
    Point2 center{side / 2.0, side / 2.0};
    for (int i = 0; i < spec.n; ++i) {
        double ang = kTwoPi * i / spec.n;
        Point2 p{center.x + radius * std::cos(ang), center.y + radius * std::sin(ang)};
        Point2 g{center.x - radius * std::cos(ang), center.y - radius * std::sin(ang)};
        AgentSpawn a;
        a.spawn = {p.x, p.y, wrap_angle(std::atan2(g.y - p.y, g.x - p.x))};
        a.goal = g;
        a.join_time = 0.0;
        sc.agents.push_back(a);
    }
    sc.duration = 6.0 * (2.0 * radius) / dyn.v + 60.0;
    return sc;
}

Scenario generate_city_scenario(const CityLikeSpec& spec, const R3RParams& params,
                                const DubinsParams& dyn, uint64_t seed) {
    if (spec.n < 1) throw std::invalid_argument("generate_city_scenario: n must be >= 1");
    std::mt19937_64 rng(seed);
    double res = 0.5;
    double inflation = default_inflation(params.delta());
    double rt = dyn.turn_radius();
    double street = std::max(4.0 * rt, 4.0 * rt + 2.0 * inflation + 2.0 * params.delta());
    double block = std::clamp(spec.side / 8.0, 6.0, 16.0);

    int cells = static_cast<int>(std::ceil(spec.side / res));
    OccupancyEnvironment env(cells, cells, res, 0.0);

    // axis-aligned blocks on a jittered lattice, streets kept clear
    std::uniform_real_distribution<double> jitter(-street * 0.2, street * 0.2);
    double pitch = block + street;
    for (double by = street; by + block < spec.side - street / 2.0; by += pitch) {
        for (double bx = street; bx + block < spec.side - street / 2.0; bx += pitch) {
            double jx = jitter(rng), jy = jitter(rng);
            double x0 = std::max(street, bx + jx);
            double y0 = std::max(street, by + jy);
            double x1 = std::min(spec.side - street, x0 + block);
            double y1 = std::min(spec.side - street, y0 + block);
            int cx0 = static_cast<int>(x0 / res), cx1 = static_cast<int>(x1 / res);
            int cy0 = static_cast<int>(y0 / res), cy1 = static_cast<int>(y1 / res);
            for (int iy = cy0; iy < cy1 && iy < cells; ++iy) {
                for (int ix = cx0; ix < cx1 && ix < cells; ++ix) {
                    env.set_occupied(ix, iy, true);
                }
            }
        }
    }
    env.set_inflation(inflation);

    double min_sep = 2.0 * params.r_plan() + params.delta();
    double goal_clear = 2.0 * rt + inflation * 0.5;
    Scenario sc{std::move(env), {}, params, dyn, 0.0, seed, "city-like"};
    sc.agents = sample_spawns(sc.env, spec.n, min_sep, goal_clear, goal_clear, rng);
    sc.duration = 4.0 * spec.side / dyn.v;
    return sc;
}

Scenario generate_mapfile_scenario(const MapFileSpec& spec, const R3RParams& params,
                                   const DubinsParams& dyn, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::ostringstream buf;
    {
        std::ifstream f(spec.path);
        if (!f) throw std::runtime_error("generate_mapfile_scenario: cannot open " + spec.path);
        buf << f.rdbuf();
    }
    OccupancyEnvironment env = load_map(buf.str(), default_inflation(params.delta()));
    double min_sep = 2.0 * params.r_plan() + params.delta();
    double goal_clear = 2.0 * dyn.turn_radius() + env.inflation() * 0.5;
    Scenario sc{std::move(env), {}, params, dyn, 0.0, seed, "mapfile"};
    sc.agents = sample_spawns(sc.env, spec.n, min_sep, goal_clear, goal_clear, rng);
    sc.duration = 4.0 * std::max(sc.env.world_width(), sc.env.world_height()) / dyn.v;
    return sc;
}

}  // namespace r3r
