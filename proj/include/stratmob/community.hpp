#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stratmob/netgraph.hpp"

namespace stratmob {

/// Result of multi-level modularity optimization.
struct CommunityPartition {
    std::vector<int> assignment;              // node index -> dense community id
    double modularity = 0.0;
    std::vector<std::vector<int>> levels;     // per-pass assignments on original nodes
    std::vector<double> level_modularity;     // Q after each pass

    int community_count() const;
};

/// Weighted modularity of a partition, Q = sum_c [S_in/(2m) - (S_tot/(2m))^2],
/// using edge strengths as weights. Throws when a node is unassigned
/// (assignment shorter than the node count or containing negatives).
double modularity(const OccupationGraph& g, const std::vector<int>& assignment,
                  double resolution = 1.0);

/// Louvain: local moves + aggregation until no modularity gain above 1e-9.
/// Node visit order is shuffled by the seeded RNG; ties in gain break toward
/// the lowest candidate community id, so the result is deterministic given
/// (graph, seed, resolution).
CommunityPartition louvain(const OccupationGraph& g, std::uint64_t seed = 0,
                           double resolution = 1.0);

/// Chance-corrected agreement between two labelings of the same nodes.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

void write_communities_csv(const std::string& path, const OccupationGraph& g,
                           const CommunityPartition& p);
CommunityPartition read_communities_csv(const std::string& path, const OccupationGraph& g);
std::string community_summary(const OccupationGraph& g, const CommunityPartition& p);

}  // namespace stratmob
