#include "stratmob/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "stratmob/csv.hpp"

namespace stratmob {

std::string to_string(LengthRule rule) {
    switch (rule) {
        case LengthRule::reciprocal: return "reciprocal";
        case LengthRule::neglog: return "neglog";
        case LengthRule::unit: return "unit";
    }
    return "?";
}

LengthRule length_rule_from_string(const std::string& name) {
    if (name == "reciprocal") return LengthRule::reciprocal;
    if (name == "neglog") return LengthRule::neglog;
    if (name == "unit") return LengthRule::unit;
    throw std::invalid_argument("unknown length rule: " + name);
}

std::vector<std::vector<std::pair<int, int>>> OccupationGraph::adjacency() const {
    std::vector<std::vector<std::pair<int, int>>> adj(nodes.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        adj[static_cast<std::size_t>(edges[e].a)].emplace_back(edges[e].b, static_cast<int>(e));
        adj[static_cast<std::size_t>(edges[e].b)].emplace_back(edges[e].a, static_cast<int>(e));
    }
    return adj;
}

int DistanceMatrix::index_of(const std::string& code) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == code) return static_cast<int>(i);
    return -1;
}

namespace {
double edge_length(double strength, LengthRule rule) {
    switch (rule) {
        case LengthRule::reciprocal: return 1.0 / strength;
        case LengthRule::neglog: return -std::log(strength / (strength + 1.0));
        case LengthRule::unit: return 1.0;
    }
    return 0.0;
}
}  // namespace

OccupationGraph to_graph(const StrengthMatrix& s, LengthRule rule) {
    OccupationGraph g;
    g.nodes = s.occupations;
    g.length_rule = rule;
    const Eigen::Index c = s.V.rows();
    for (Eigen::Index i = 0; i < c; ++i)
        for (Eigen::Index j = i + 1; j < c; ++j) {
            const double v = s.V(i, j);
            if (v > 0.0)
                g.edges.push_back({static_cast<int>(i), static_cast<int>(j), v,
                                   edge_length(v, rule)});
        }
    return g;
}

DistanceMatrix geodesic_all_pairs(const OccupationGraph& g) {
    const double inf = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(g.node_count());
    DistanceMatrix out;
    out.nodes = g.nodes;
    out.d = Eigen::MatrixXd::Constant(n, n, inf);
    auto adj = g.adjacency();

    std::vector<double> dist(static_cast<std::size_t>(n));
    for (int src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), inf);
        dist[static_cast<std::size_t>(src)] = 0.0;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.emplace(0.0, src);
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[static_cast<std::size_t>(u)]) continue;
            for (auto [v, e] : adj[static_cast<std::size_t>(u)]) {
                double nd = d + g.edges[static_cast<std::size_t>(e)].length;
                if (nd < dist[static_cast<std::size_t>(v)]) {
                    dist[static_cast<std::size_t>(v)] = nd;
                    pq.emplace(nd, v);
                }
            }
        }
        for (int v = 0; v < n; ++v) out.d(src, v) = dist[static_cast<std::size_t>(v)];
    }
    return out;
}

double strength_quantile(const OccupationGraph& g, double q) {
    if (g.edges.empty()) throw std::runtime_error("strength_quantile on empty edge set");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile must lie in [0,1]");
    std::vector<double> s;
    s.reserve(g.edges.size());
    for (const auto& e : g.edges) s.push_back(e.strength);
    std::sort(s.begin(), s.end());
    // linear interpolation between order statistics (R type 7)
    const double h = q * (static_cast<double>(s.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    const double frac = h - std::floor(h);
    return s[lo] + frac * (s[hi] - s[lo]);
}

void write_distances_long_csv(const std::string& path, const DistanceMatrix& d) {
    std::vector<std::vector<std::string>> rows;
    const Eigen::Index n = d.d.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double v = d.d(i, j);
            rows.push_back({d.nodes[static_cast<std::size_t>(i)],
                            d.nodes[static_cast<std::size_t>(j)],
                            std::isinf(v) ? "inf" : csv::format_exact(v)});
        }
    csv::write_file(path, {"occ_i", "occ_j", "distance"}, rows);
}

DistanceMatrix read_distances_long_csv(const std::string& path) {
    csv::Table t = csv::read_file(path);
    auto ci = t.column("occ_i"), cj = t.column("occ_j"), cd = t.column("distance");
    if (!ci || !cj || !cd) throw std::runtime_error("malformed distances CSV: " + path);
    std::set<std::string> codes;
    for (const auto& r : t.rows) {
        codes.insert(r[*ci]);
        codes.insert(r[*cj]);
    }
    DistanceMatrix d;
    d.nodes.assign(codes.begin(), codes.end());
    std::map<std::string, Eigen::Index> ix;
    for (std::size_t i = 0; i < d.nodes.size(); ++i) ix[d.nodes[i]] = static_cast<Eigen::Index>(i);
    const Eigen::Index n = static_cast<Eigen::Index>(d.nodes.size());
    d.d = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
    for (Eigen::Index i = 0; i < n; ++i) d.d(i, i) = 0.0;
    for (const auto& r : t.rows) {
        Eigen::Index i = ix[r[*ci]], j = ix[r[*cj]];
        double v = r[*cd] == "inf" ? std::numeric_limits<double>::infinity() : std::stod(r[*cd]);
        d.d(i, j) = d.d(j, i) = v;
    }
    return d;
}

void write_distances_matrix_csv(const std::string& path, const DistanceMatrix& d) {
    std::vector<std::string> header{"occ2"};
    header.insert(header.end(), d.nodes.begin(), d.nodes.end());
    std::vector<std::vector<std::string>> rows;
    const Eigen::Index n = d.d.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<std::string> row{d.nodes[static_cast<std::size_t>(i)]};
        for (Eigen::Index j = 0; j < n; ++j) {
            double v = d.d(i, j);
            row.push_back(std::isinf(v) ? "inf" : csv::format_exact(v));
        }
        rows.push_back(std::move(row));
    }
    csv::write_file(path, header, rows);
}

void write_edge_list_csv(const std::string& path, const OccupationGraph& g) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : g.edges)
        rows.push_back({g.nodes[static_cast<std::size_t>(e.a)],
                        g.nodes[static_cast<std::size_t>(e.b)], csv::format_exact(e.strength),
                        csv::format_exact(e.length)});
    csv::write_file(path, {"occ_i", "occ_j", "strength", "length"}, rows);
}

void write_graphml(const std::string& path, const OccupationGraph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"w\" for=\"edge\" attr.name=\"strength\" attr.type=\"double\"/>\n"
        << "  <key id=\"l\" for=\"edge\" attr.name=\"length\" attr.type=\"double\"/>\n"
        << "  <graph id=\"occupations\" edgedefault=\"undirected\">\n";
    for (const auto& node : g.nodes) out << "    <node id=\"n" << node << "\"/>\n";
    for (const auto& e : g.edges)
        out << "    <edge source=\"n" << g.nodes[static_cast<std::size_t>(e.a)] << "\" target=\"n"
            << g.nodes[static_cast<std::size_t>(e.b)] << "\"><data key=\"w\">"
            << csv::format_exact(e.strength) << "</data><data key=\"l\">"
            << csv::format_exact(e.length) << "</data></edge>\n";
    out << "  </graph>\n</graphml>\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace stratmob
