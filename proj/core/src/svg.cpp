#include "r3r/commands.hpp"

#include <cstdio>
#include <ostream>

namespace r3r {

namespace {

const char* path_color(int id) {
    static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                     "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return kPalette[static_cast<size_t>(id) % 10];
}

}  // namespace

void write_svg(std::ostream& os, const OccupancyEnvironment& env,
               const std::vector<AgentTrace>& traces, const std::vector<ExportAgentInfo>& agents,
               double r_plan) {
    double w = env.world_width();
    double h = env.world_height();
    double scale = 8.0;
    char buf[512];

    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.3f %.3f\">\n",
                  w * scale, h * scale, w, h);
    os << buf;
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // occupied cells (y flipped so the map reads like the file)
    os << "<g fill=\"#444444\">\n";
    for (int iy = 0; iy < env.height(); ++iy) {
        for (int ix = 0; ix < env.width(); ++ix) {
            if (!env.occupied_raw(ix, iy)) continue;
            std::snprintf(buf, sizeof(buf),
                          "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\"/>\n",
                          ix * env.resolution(), h - (iy + 1) * env.resolution(),
                          env.resolution(), env.resolution());
            os << buf;
        }
    }
    os << "</g>\n";

    // one planning circle per agent at its final commit anchor
    for (const ExportAgentInfo& a : agents) {
        Point2 c = a.has_anchor ? a.final_anchor : a.goal;
        std::snprintf(buf, sizeof(buf),
                      "<circle class=\"plan\" cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"%s\" "
                      "fill-opacity=\"0.08\" stroke=\"%s\" stroke-width=\"0.05\"/>\n",
                      c.x, h - c.y, r_plan, path_color(a.id), path_color(a.id));
        os << buf;
    }

    for (const AgentTrace& tr : traces) {
        if (tr.samples.empty()) continue;
        os << "<polyline class=\"path\" fill=\"none\" stroke=\"" << path_color(tr.id)
           << "\" stroke-width=\"0.12\" points=\"";
        size_t stride = std::max<size_t>(1, tr.samples.size() / 2000);
        for (size_t i = 0; i < tr.samples.size(); i += stride) {
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", tr.samples[i].x, h - tr.samples[i].y);
            os << buf;
        }
        const TraceSample& last = tr.samples.back();
        std::snprintf(buf, sizeof(buf), "%.2f,%.2f", last.x, h - last.y);
        os << buf << "\"/>\n";
    }

    for (const ExportAgentInfo& a : agents) {
        std::snprintf(buf, sizeof(buf),
                      "<g class=\"goal\" stroke=\"%s\" stroke-width=\"0.08\">"
                      "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>"
                      "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/></g>\n",
                      path_color(a.id), a.goal.x - 0.4, h - a.goal.y - 0.4, a.goal.x + 0.4,
                      h - a.goal.y + 0.4, a.goal.x - 0.4, h - a.goal.y + 0.4, a.goal.x + 0.4,
                      h - a.goal.y - 0.4);
        os << buf;
    }
    os << "</svg>\n";
}

}  // namespace r3r
