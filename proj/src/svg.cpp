#include "rcp/svg.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace rcp {

namespace {

constexpr double kPxPerSite = 24.0;
constexpr double kPxPerTime = 8.0;
constexpr double kMargin = 16.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string render_svg(const HarrisSystem& system, double lambda,
                       const PropagationResult* infection) {
    if (system.lattice.d != 1) throw std::invalid_argument("render_svg: one-dimensional only");
    const int a = system.lattice.lo[0], b = system.lattice.hi[0];
    const double span = system.t_hi - system.t_lo;
    const double width = (b - a) * kPxPerSite + 2 * kMargin;
    const double height = span * kPxPerTime + 2 * kMargin;
    auto x_of = [&](int site_coord) { return kMargin + (site_coord - a) * kPxPerSite; };
    auto y_of = [&](double t) { return height - kMargin - (t - system.t_lo) * kPxPerTime; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
        << num(height) << "\">\n";

    for (int s = a; s <= b; ++s) {
        const double x = x_of(s);
        svg << "<line class=\"timeline\" x1=\"" << num(x) << "\" y1=\"" << num(y_of(system.t_lo))
            << "\" x2=\"" << num(x) << "\" y2=\"" << num(y_of(system.t_hi))
            << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    }

    for (int s = a; s <= b; ++s) {
        const auto site = static_cast<std::int32_t>(system.lattice.index_of({s}));
        const double x = x_of(s);
        for (double m : system.trains[site].marks) {
            if (m < system.t_lo || m > system.t_hi) continue;
            svg << "<line class=\"mark\" x1=\"" << num(x - 4) << "\" y1=\"" << num(y_of(m))
                << "\" x2=\"" << num(x + 4) << "\" y2=\"" << num(y_of(m))
                << "\" stroke=\"#c33\" stroke-width=\"2\"/>\n";
        }
    }

    for (std::size_t e = 0; e < system.edges.size(); ++e) {
        const auto [from, to] = system.edges[e];
        const int xf = system.lattice.coord_of(from)[0];
        const int xt = system.lattice.coord_of(to)[0];
        for (const auto& arrow : system.arrows[e]) {
            if (!system.arrow_active(arrow, lambda)) continue;
            const double y = y_of(arrow.time);
            const double x1 = x_of(xf), x2 = x_of(xt);
            const double tip = xt > xf ? x2 - 3 : x2 + 3;
            svg << "<line class=\"arrow\" x1=\"" << num(x1) << "\" y1=\"" << num(y) << "\" x2=\""
                << num(x2) << "\" y2=\"" << num(y) << "\" stroke=\"#36c\" stroke-width=\"1.5\"/>\n"
                << "<path class=\"arrowhead\" d=\"M" << num(x2) << " " << num(y) << " L" << num(tip)
                << " " << num(y - 3) << " L" << num(tip) << " " << num(y + 3)
                << " Z\" fill=\"#36c\"/>\n";
        }
    }

    if (infection != nullptr) {
        for (int s = a; s <= b; ++s) {
            const auto site = static_cast<std::int32_t>(system.lattice.index_of({s}));
            const double x = x_of(s);
            for (const auto& iv : infection->site_intervals(site)) {
                if (iv.end <= iv.start) continue;
                svg << "<line class=\"infected\" x1=\"" << num(x) << "\" y1=\""
                    << num(y_of(iv.start)) << "\" x2=\"" << num(x) << "\" y2=\""
                    << num(y_of(iv.end))
                    << "\" stroke=\"#2a2\" stroke-width=\"5\" stroke-opacity=\"0.6\"/>\n";
            }
        }
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace rcp
