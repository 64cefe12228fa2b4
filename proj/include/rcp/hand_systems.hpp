#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "rcp/harris.hpp"

namespace rcp {

struct HandArrow {
    int from;  // site coordinate (d = 1)
    int to;
    double time;
    double mark = 0.0;  // active at every lambda > 0 by default
};

// Assembles a frozen d=1 system from explicit marks and arrows. Used by the
// hand-built reference systems and by tests that need exact event placement.
inline HarrisSystem make_hand_system(int a, int b, double t_lo, double t_hi,
                                     std::vector<std::vector<double>> marks_per_site,
                                     const std::vector<HandArrow>& arrows,
                                     double lambda_max = 1.0) {
    HarrisSystem sys;
    sys.lattice = Lattice::line(a, b);
    sys.t_lo = t_lo;
    sys.t_hi = t_hi;
    sys.law = InterarrivalLaw::exponential(1.0);  // placeholder; marks are explicit
    sys.lambda_max = lambda_max;
    sys.master_seed = 0;
    sys.edges = sys.lattice.directed_edges();
    sys.arrows.resize(sys.edges.size());
    const auto n_sites = sys.lattice.site_count();
    if (static_cast<std::int64_t>(marks_per_site.size()) != n_sites)
        throw std::invalid_argument("make_hand_system: marks list size mismatch");
    for (const auto& arrow : arrows) {
        bool placed = false;
        for (std::size_t e = 0; e < sys.edges.size(); ++e) {
            if (sys.lattice.coord_of(sys.edges[e].first)[0] == arrow.from &&
                sys.lattice.coord_of(sys.edges[e].second)[0] == arrow.to) {
                sys.arrows[e].push_back({arrow.time, arrow.mark});
                placed = true;
            }
        }
        if (!placed) throw std::invalid_argument("make_hand_system: arrow on a non-edge");
    }
    for (auto& list : sys.arrows)
        std::sort(list.begin(), list.end(),
                  [](const Arrow& x, const Arrow& y) { return x.time < y.time; });
    for (std::int64_t s = 0; s < n_sites; ++s) {
        RenewalTrain tr{t_lo, t_hi, std::move(marks_per_site[s])};
        std::sort(tr.marks.begin(), tr.marks.end());
        sys.trains.push_back(std::move(tr));
    }
    sys.out_edges.resize(n_sites);
    for (std::size_t e = 0; e < sys.edges.size(); ++e)
        sys.out_edges[sys.edges[e].first].push_back(static_cast<std::int32_t>(e));
    return sys;
}

// H1: two sites, one arrow 0 -> 1 at t = 1, marks {3} and {0.5, 2},
// window [0, 4]. Seeding (0, t=0) infects site 0 on [0,3) and site 1 on [1,2).
inline HarrisSystem make_hand_system_h1() {
    return make_hand_system(0, 1, 0.0, 4.0, {{3.0}, {0.5, 2.0}}, {{0, 1, 1.0}});
}

// H2: three sites where only the zig-zag 0 -> 1 -> 2 survives to the top of
// [0,2] x [0,4]; every single timeline dies before t = 4.
inline HarrisSystem make_hand_system_h2() {
    return make_hand_system(0, 2, 0.0, 4.0, {{2.5}, {0.5, 3.5}, {1.2}},
                            {{0, 1, 1.0}, {1, 2, 2.0}});
}

}  // namespace rcp
