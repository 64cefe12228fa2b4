#pragma once

#include <string>

#include "rcp/harris.hpp"
#include "rcp/reachability.hpp"

namespace rcp {

// Deterministic space-time diagram (d = 1): timelines as vertical segments,
// renewal marks as ticks, active arrows as horizontal arrows, infected
// intervals as thick overlays. 1 site = 24 px horizontal, 1 time unit = 8 px
// vertical, time increasing upward.
std::string render_svg(const HarrisSystem& system, double lambda,
                       const PropagationResult* infection = nullptr);

}  // namespace rcp
