#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "stratmob/project.hpp"

namespace stratmob {

enum class LengthRule { reciprocal, neglog, unit };

std::string to_string(LengthRule rule);
LengthRule length_rule_from_string(const std::string& name);

struct GraphEdge {
    int a = 0;
    int b = 0;             // a < b
    double strength = 0.0;  // V_ij > 0
    double length = 0.0;    // > 0, per length rule
};

/// Undirected occupational graph; only positive-strength pairs carry edges.
struct OccupationGraph {
    std::vector<std::string> nodes;
    std::vector<GraphEdge> edges;
    LengthRule length_rule = LengthRule::reciprocal;

    std::size_t node_count() const { return nodes.size(); }
    /// adjacency as (neighbor, edge index) lists
    std::vector<std::vector<std::pair<int, int>>> adjacency() const;
};

/// All-pairs geodesic distances; +infinity marks disconnected pairs.
struct DistanceMatrix {
    std::vector<std::string> nodes;
    Eigen::MatrixXd d;

    int index_of(const std::string& code) const;  // -1 when absent
};

OccupationGraph to_graph(const StrengthMatrix& s, LengthRule rule = LengthRule::reciprocal);

/// Dijkstra from every source over positive edge lengths.
DistanceMatrix geodesic_all_pairs(const OccupationGraph& g);

/// Linearly interpolated q-quantile of edge strengths. Throws on empty edge
/// set.
double strength_quantile(const OccupationGraph& g, double q);

void write_distances_long_csv(const std::string& path, const DistanceMatrix& d);
void write_distances_matrix_csv(const std::string& path, const DistanceMatrix& d);
DistanceMatrix read_distances_long_csv(const std::string& path);
void write_edge_list_csv(const std::string& path, const OccupationGraph& g);
void write_graphml(const std::string& path, const OccupationGraph& g);

}  // namespace stratmob
