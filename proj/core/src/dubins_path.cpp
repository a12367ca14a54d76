#include "r3r/dubins_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace r3r {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mod2pi(double x) {
    double m = std::fmod(x, kTwoPi);
    if (m < 0.0) m += kTwoPi;
    return m;
}

struct Word {
    bool ok = false;
    double t = 0.0, p = 0.0, q = 0.0;  // normalized segment lengths
};

Word lsl(double alpha, double beta, double d, double sa, double sb, double ca, double cb,
         double c_ab) {
    double p2 = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sa - sb);
    if (p2 < 0.0) return {};
    double tmp = std::atan2(cb - ca, d + sa - sb);
    return {true, mod2pi(-alpha + tmp), std::sqrt(p2), mod2pi(beta - tmp)};
}

Word rsr(double alpha, double beta, double d, double sa, double sb, double ca, double cb,
         double c_ab) {
    double p2 = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sb - sa);
    if (p2 < 0.0) return {};
    double tmp = std::atan2(ca - cb, d - sa + sb);
    return {true, mod2pi(alpha - tmp), std::sqrt(p2), mod2pi(-beta + tmp)};
}

Word lsr(double alpha, double beta, double d, double sa, double sb, double ca, double cb,
         double c_ab) {
    double p2 = -2.0 + d * d + 2.0 * c_ab + 2.0 * d * (sa + sb);
    if (p2 < 0.0) return {};
    double p = std::sqrt(p2);
    double tmp = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
    return {true, mod2pi(-alpha + tmp), p, mod2pi(-mod2pi(beta) + tmp)};
}

Word rsl(double alpha, double beta, double d, double sa, double sb, double ca, double cb,
         double c_ab) {
    double p2 = d * d - 2.0 + 2.0 * c_ab - 2.0 * d * (sa + sb);
    if (p2 < 0.0) return {};
    double p = std::sqrt(p2);
    double tmp = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
    return {true, mod2pi(alpha - tmp), p, mod2pi(beta - tmp)};
}

Word rlr(double alpha, double beta, double d, double sa, double sb, double ca, double cb,
         double c_ab) {
    double tmp = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sa - sb)) / 8.0;
    if (std::abs(tmp) > 1.0) return {};
    double p = mod2pi(kTwoPi - std::acos(tmp));
    double t = mod2pi(alpha - std::atan2(ca - cb, d - sa + sb) + mod2pi(p / 2.0));
    return {true, t, p, mod2pi(alpha - beta - t + mod2pi(p))};
}

Word lrl(double alpha, double beta, double d, double sa, double sb, double ca, double cb,
         double c_ab) {
    double tmp = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (-sa + sb)) / 8.0;
    if (std::abs(tmp) > 1.0) return {};
    double p = mod2pi(kTwoPi - std::acos(tmp));
    double t = mod2pi(-alpha - std::atan2(ca - cb, d + sa - sb) + p / 2.0);
    return {true, t, p, mod2pi(mod2pi(beta) - alpha - t + mod2pi(p))};
}

}  // namespace

std::optional<DubinsPath> dubins_shortest_path(const DubinsState& from, const DubinsState& to,
                                               double rho) {
    if (!(rho > 0.0)) return std::nullopt;
    double dx = to.x - from.x;
    double dy = to.y - from.y;
    double d = std::hypot(dx, dy) / rho;
    double phi = std::atan2(dy, dx);
    double alpha = mod2pi(from.theta - phi);
    double beta = mod2pi(to.theta - phi);
    double sa = std::sin(alpha), sb = std::sin(beta);
    double ca = std::cos(alpha), cb = std::cos(beta);
    double c_ab = std::cos(alpha - beta);

    struct Candidate {
        Word (*fn)(double, double, double, double, double, double, double, double);
        std::array<int, 3> turns;
    };
    static constexpr Candidate kWords[] = {
        {lsl, {+1, 0, +1}}, {rsr, {-1, 0, -1}}, {lsr, {+1, 0, -1}},
        {rsl, {-1, 0, +1}}, {rlr, {-1, +1, -1}}, {lrl, {+1, -1, +1}},
    };

    DubinsPath best;
    double best_len = std::numeric_limits<double>::infinity();
    bool found = false;
    for (const auto& cand : kWords) {
        Word w = cand.fn(alpha, beta, d, sa, sb, ca, cb, c_ab);
        if (!w.ok) continue;
        double len = (w.t + w.p + w.q) * rho;
        if (len < best_len) {
            best_len = len;
            best.start = from;
            best.rho = rho;
            best.seg_len = {w.t * rho, w.p * rho, w.q * rho};
            best.seg_turn = cand.turns;
            found = true;
        }
    }
    if (!found) return std::nullopt;
    return best;
}

DubinsState dubins_path_sample(const DubinsPath& path, double s) {
    DubinsState q = path.start;
    double remaining = std::clamp(s, 0.0, path.length());
    for (int i = 0; i < 3; ++i) {
        double seg = std::min(remaining, path.seg_len[static_cast<size_t>(i)]);
        if (seg <= 0.0) continue;
        int turn = path.seg_turn[static_cast<size_t>(i)];
        if (turn == 0) {
            q.x += seg * std::cos(q.theta);
            q.y += seg * std::sin(q.theta);
        } else {
            double dth = turn * seg / path.rho;
            double th1 = q.theta + dth;
            q.x += path.rho * turn * (std::sin(th1) - std::sin(q.theta));
            q.y -= path.rho * turn * (std::cos(th1) - std::cos(q.theta));
            q.theta = th1;
        }
        remaining -= seg;
    }
    q.theta = wrap_angle(q.theta);
    return q;
}

std::vector<ControlSegment> dubins_controls(const DubinsPath& path, const DubinsParams& p) {
    std::vector<ControlSegment> out;
    for (int i = 0; i < 3; ++i) {
        double len = path.seg_len[static_cast<size_t>(i)];
        if (len <= 1e-12) continue;
        int turn = path.seg_turn[static_cast<size_t>(i)];
        out.push_back({turn * p.v / path.rho, len / p.v});
    }
    return out;
}

}  // namespace r3r
