#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stratmob/community.hpp"
#include "stratmob/netgraph.hpp"

namespace stratmob {

struct LayoutResult {
    std::vector<std::string> nodes;
    std::vector<double> x;
    std::vector<double> y;
    double width = 0.0;
    double height = 0.0;
    int iterations = 0;
    std::uint64_t seed = 0;
};

/// Classic Fruchterman-Reingold in a [0,W]x[0,H] frame: repulsion k^2/d for
/// all pairs, attraction d^2/k along edges scaled by mean-normalized edge
/// strength, linearly cooling temperature from W/10 to 0, positions clamped
/// to the frame. A single node lands at the frame midpoint.
LayoutResult fruchterman_reingold(const OccupationGraph& g, double width, double height,
                                  int iterations = 500, std::uint64_t seed = 0);

/// SVG 1.1 rendering: nodes colored by community and labeled by code; only
/// edges with strength strictly above the threshold are drawn; stroke width
/// is affine in strength between 0.5 and 6.0 units.
std::string render_svg(const OccupationGraph& g, const LayoutResult& layout,
                       const CommunityPartition& partition, double strength_threshold);

void write_positions_csv(const std::string& path, const LayoutResult& layout);

}  // namespace stratmob
