#include "r3r/simulator.hpp"

#include <cmath>
#include <map>

// The offline safety verifier. Deliberately self-contained: distances and
// point-in-grid tests are written out here rather than routed through the
// geometry or environment helpers the validation path uses.

namespace r3r {

namespace {

// trace files round to 1e-6; allow that much slack on the delta comparison
constexpr double kRounding = 3e-6;

struct OpenRun {
    double t_begin = 0.0;
    double t_last = 0.0;
    double worst = std::numeric_limits<double>::infinity();
    bool open = false;
};

}  // namespace

std::vector<OracleViolation> oracle_check(const std::vector<AgentTrace>& traces,
                                          const Scenario& scenario, double oracle_dt) {
    if (!(oracle_dt > 0.0)) throw std::invalid_argument("oracle_check: oracle_dt must be > 0");
    const double delta = scenario.params.delta();
    const double res = scenario.env.resolution();
    const int gw = scenario.env.width();
    const int gh = scenario.env.height();

    // trace rows share the simulation grid; index them by step number
    double trace_dt = 0.0;
    for (const AgentTrace& tr : traces) {
        if (tr.samples.size() >= 2) {
            trace_dt = tr.samples[1].t - tr.samples[0].t;
            break;
        }
    }
    if (trace_dt <= 0.0) trace_dt = oracle_dt;
    long stride = std::max(1L, std::lround(oracle_dt / trace_dt));

    struct Indexed {
        int id;
        long first_step;
        const std::vector<TraceSample>* samples;
    };
    std::vector<Indexed> idx;
    long max_step = 0;
    for (const AgentTrace& tr : traces) {
        if (tr.samples.empty()) continue;
        long first = std::lround(tr.samples.front().t / trace_dt);
        idx.push_back({tr.id, first, &tr.samples});
        max_step = std::max(max_step, first + static_cast<long>(tr.samples.size()) - 1);
    }

    auto at_step = [](const Indexed& a, long step) -> const TraceSample* {
        long off = step - a.first_step;
        if (off < 0 || off >= static_cast<long>(a.samples->size())) return nullptr;
        return &(*a.samples)[static_cast<size_t>(off)];
    };

    std::vector<OracleViolation> out;
    std::map<std::pair<int, int>, OpenRun> runs;

    auto feed = [&](std::pair<int, int> key, double t, bool violating, double measure) {
        OpenRun& run = runs[key];
        if (violating) {
            if (!run.open) {
                run.open = true;
                run.t_begin = t;
                run.worst = measure;
            }
            run.t_last = t;
            run.worst = std::min(run.worst, measure);
        } else if (run.open) {
            out.push_back({run.t_begin, run.t_last, key.first, key.second, run.worst});
            run.open = false;
        }
    };

    for (long step = 0; step <= max_step; step += stride) {
        for (size_t i = 0; i < idx.size(); ++i) {
            const TraceSample* a = at_step(idx[i], step);
            if (a == nullptr) continue;
            double t = a->t;

            // static safety: the sampled position must sit in an inflated-free cell
            int cx = static_cast<int>(std::floor(a->x / res));
            int cy = static_cast<int>(std::floor(a->y / res));
            bool unsafe = cx < 0 || cy < 0 || cx >= gw || cy >= gh ||
                          scenario.env.occupied_inflated(cx, cy);
            feed({idx[i].id, -1}, t, unsafe, 0.0);

            for (size_t j = i + 1; j < idx.size(); ++j) {
                const TraceSample* b = at_step(idx[j], step);
                if (b == nullptr) continue;
                double dx = a->x - b->x;
                double dy = a->y - b->y;
                double d = std::sqrt(dx * dx + dy * dy);
                feed({idx[i].id, idx[j].id}, t, d < delta - kRounding, d);
            }
        }
    }
    for (auto& [key, run] : runs) {
        if (run.open) out.push_back({run.t_begin, run.t_last, key.first, key.second, run.worst});
    }
    return out;
}

}  // namespace r3r
