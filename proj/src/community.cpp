#include "stratmob/community.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "stratmob/csv.hpp"
#include "stratmob/nco.hpp"
#include "stratmob/rng.hpp"

namespace stratmob {

int CommunityPartition::community_count() const {
    int k = 0;
    for (int c : assignment) k = std::max(k, c + 1);
    return k;
}

double modularity(const OccupationGraph& g, const std::vector<int>& assignment,
                  double resolution) {
    const std::size_t n = g.node_count();
    if (assignment.size() < n) throw std::invalid_argument("assignment does not cover all nodes");
    for (std::size_t i = 0; i < n; ++i)
        if (assignment[i] < 0) throw std::invalid_argument("node missing from assignment");
    if (g.edges.empty()) return 0.0;

    int k = 0;
    for (std::size_t i = 0; i < n; ++i) k = std::max(k, assignment[i] + 1);
    std::vector<double> s_in(static_cast<std::size_t>(k), 0.0);
    std::vector<double> s_tot(static_cast<std::size_t>(k), 0.0);
    double two_m = 0.0;
    for (const auto& e : g.edges) {
        two_m += 2.0 * e.strength;
        s_tot[static_cast<std::size_t>(assignment[static_cast<std::size_t>(e.a)])] += e.strength;
        s_tot[static_cast<std::size_t>(assignment[static_cast<std::size_t>(e.b)])] += e.strength;
        if (assignment[static_cast<std::size_t>(e.a)] == assignment[static_cast<std::size_t>(e.b)])
            s_in[static_cast<std::size_t>(assignment[static_cast<std::size_t>(e.a)])] +=
                2.0 * e.strength;
    }
    double q = 0.0;
    for (int c = 0; c < k; ++c) {
        double in = s_in[static_cast<std::size_t>(c)];
        double tot = s_tot[static_cast<std::size_t>(c)];
        q += in / two_m - resolution * (tot / two_m) * (tot / two_m);
    }
    return q;
}

namespace {

// Aggregated working graph for the multi-level passes. Self-loops hold the
// internal weight of collapsed communities; they contribute twice to degree.
struct WorkGraph {
    std::vector<std::vector<std::pair<int, double>>> adj;  // neighbor, weight (no self)
    std::vector<double> self_loop;                         // w_ii
    double two_m = 0.0;

    std::size_t size() const { return adj.size(); }
    double degree(int i) const {
        double k = 2.0 * self_loop[static_cast<std::size_t>(i)];
        for (auto [j, w] : adj[static_cast<std::size_t>(i)]) k += w;
        return k;
    }
};

// One pass of local moves; returns the node->community map (not yet dense).
std::vector<int> local_moves(const WorkGraph& g, Rng& rng, double resolution, double tol) {
    const int n = static_cast<int>(g.size());
    std::vector<int> comm(static_cast<std::size_t>(n));
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> degree(static_cast<std::size_t>(n));
    std::vector<double> s_tot(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        degree[static_cast<std::size_t>(i)] = g.degree(i);
        s_tot[static_cast<std::size_t>(i)] = degree[static_cast<std::size_t>(i)];
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    std::vector<double> weight_to(static_cast<std::size_t>(n), 0.0);
    bool moved = true;
    while (moved) {
        moved = false;
        for (int u : order) {
            const int old_c = comm[static_cast<std::size_t>(u)];
            // link weight from u to each adjacent community
            std::vector<int> touched;
            for (auto [v, w] : g.adj[static_cast<std::size_t>(u)]) {
                int c = comm[static_cast<std::size_t>(v)];
                if (weight_to[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
                weight_to[static_cast<std::size_t>(c)] += w;
            }
            const double ku = degree[static_cast<std::size_t>(u)];
            s_tot[static_cast<std::size_t>(old_c)] -= ku;
            const double remove_gain =
                weight_to[static_cast<std::size_t>(old_c)] -
                resolution * ku * s_tot[static_cast<std::size_t>(old_c)] / g.two_m;

            int best_c = old_c;
            double best_gain = remove_gain;
            std::sort(touched.begin(), touched.end());
            for (int c : touched) {
                if (c == old_c) continue;
                double gain = weight_to[static_cast<std::size_t>(c)] -
                              resolution * ku * s_tot[static_cast<std::size_t>(c)] / g.two_m;
                if (gain > best_gain + tol || (gain > best_gain - tol && c < best_c)) {
                    // strictly better, or tied with a lower community id
                    if (gain > best_gain + tol || c < best_c) {
                        best_gain = gain;
                        best_c = c;
                    }
                }
            }
            s_tot[static_cast<std::size_t>(best_c)] += ku;
            if (best_c != old_c) {
                comm[static_cast<std::size_t>(u)] = best_c;
                moved = true;
            }
            for (auto [v, w] : g.adj[static_cast<std::size_t>(u)])
                weight_to[static_cast<std::size_t>(comm[static_cast<std::size_t>(v)])] = 0.0;
            weight_to[static_cast<std::size_t>(old_c)] = 0.0;
            for (int c : touched) weight_to[static_cast<std::size_t>(c)] = 0.0;
        }
    }
    return comm;
}

std::vector<int> densify(std::vector<int> labels) {
    std::map<int, int> remap;
    for (int l : labels)
        remap.try_emplace(l, 0);
    int next = 0;
    for (auto& [old_label, dense] : remap) dense = next++;
    for (int& l : labels) l = remap[l];
    return labels;
}

WorkGraph aggregate(const WorkGraph& g, const std::vector<int>& dense_comm, int k) {
    WorkGraph out;
    out.adj.resize(static_cast<std::size_t>(k));
    out.self_loop.assign(static_cast<std::size_t>(k), 0.0);
    out.two_m = g.two_m;
    std::map<std::pair<int, int>, double> acc;
    for (std::size_t u = 0; u < g.size(); ++u) {
        int cu = dense_comm[u];
        out.self_loop[static_cast<std::size_t>(cu)] += g.self_loop[u];
        for (auto [v, w] : g.adj[u]) {
            if (static_cast<std::size_t>(v) < u) continue;  // count each edge once
            int cv = dense_comm[static_cast<std::size_t>(v)];
            if (cu == cv)
                out.self_loop[static_cast<std::size_t>(cu)] += w;
            else
                acc[{std::min(cu, cv), std::max(cu, cv)}] += w;
        }
    }
    for (const auto& [key, w] : acc) {
        out.adj[static_cast<std::size_t>(key.first)].emplace_back(key.second, w);
        out.adj[static_cast<std::size_t>(key.second)].emplace_back(key.first, w);
    }
    return out;
}

}  // namespace

CommunityPartition louvain(const OccupationGraph& g, std::uint64_t seed, double resolution) {
    const std::size_t n = g.node_count();
    if (n == 0) throw std::invalid_argument("louvain requires at least one node");
    constexpr double tol = 1e-9;

    CommunityPartition out;
    out.assignment.resize(n);
    std::iota(out.assignment.begin(), out.assignment.end(), 0);
    if (g.edges.empty()) {
        out.modularity = 0.0;
        return out;
    }

    WorkGraph wg;
    wg.adj.resize(n);
    wg.self_loop.assign(n, 0.0);
    for (const auto& e : g.edges) {
        wg.adj[static_cast<std::size_t>(e.a)].emplace_back(e.b, e.strength);
        wg.adj[static_cast<std::size_t>(e.b)].emplace_back(e.a, e.strength);
        wg.two_m += 2.0 * e.strength;
    }

    Rng rng(seed);
    std::vector<int> node_to_comm = out.assignment;  // on original nodes
    double q = modularity(g, node_to_comm, resolution);

    for (;;) {
        std::vector<int> local = densify(local_moves(wg, rng, resolution, tol));
        int k = 1 + *std::max_element(local.begin(), local.end());

        std::vector<int> projected(n);
        for (std::size_t i = 0; i < n; ++i)
            projected[i] = local[static_cast<std::size_t>(node_to_comm[i])];
        double q_new = modularity(g, projected, resolution);

        if (q_new <= q + tol) break;
        q = q_new;
        node_to_comm = projected;
        out.levels.push_back(projected);
        out.level_modularity.push_back(q_new);
        if (k == static_cast<int>(wg.size())) break;  // no aggregation possible
        wg = aggregate(wg, local, k);
    }

    out.assignment = densify(node_to_comm);
    out.modularity = modularity(g, out.assignment, resolution);
    return out;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("labelings differ in length");
    const std::size_t n = a.size();
    if (n < 2) return 1.0;
    std::map<std::pair<int, int>, long long> joint;
    std::map<int, long long> ma, mb;
    for (std::size_t i = 0; i < n; ++i) {
        ++joint[{a[i], b[i]}];
        ++ma[a[i]];
        ++mb[b[i]];
    }
    auto choose2 = [](long long x) { return static_cast<double>(x) * (x - 1) / 2.0; };
    double sum_joint = 0, sum_a = 0, sum_b = 0;
    for (const auto& [k, v] : joint) sum_joint += choose2(v);
    for (const auto& [k, v] : ma) sum_a += choose2(v);
    for (const auto& [k, v] : mb) sum_b += choose2(v);
    const double total = choose2(static_cast<long long>(n));
    const double expected = sum_a * sum_b / total;
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return 1.0;  // both partitions trivial
    return (sum_joint - expected) / (max_index - expected);
}

void write_communities_csv(const std::string& path, const OccupationGraph& g,
                           const CommunityPartition& p) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        rows.push_back({g.nodes[i], std::to_string(p.assignment[i]), nco::title(g.nodes[i])});
    csv::write_file(path, {"occ2", "community_id", "occupation_title"}, rows);
}

CommunityPartition read_communities_csv(const std::string& path, const OccupationGraph& g) {
    csv::Table t = csv::read_file(path);
    auto co = t.column("occ2"), cc = t.column("community_id");
    if (!co || !cc) throw std::runtime_error("malformed communities CSV: " + path);
    std::map<std::string, int> by_code;
    for (const auto& r : t.rows) by_code[r[*co]] = std::stoi(r[*cc]);
    CommunityPartition p;
    p.assignment.reserve(g.nodes.size());
    for (const auto& node : g.nodes) {
        auto it = by_code.find(node);
        if (it == by_code.end())
            throw std::runtime_error("communities CSV missing occupation " + node);
        p.assignment.push_back(it->second);
    }
    p.modularity = modularity(g, p.assignment);
    return p;
}

std::string community_summary(const OccupationGraph& g, const CommunityPartition& p) {
    const int k = p.community_count();
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int c : p.assignment) ++sizes[static_cast<std::size_t>(c)];
    std::ostringstream out;
    out << "communities: " << k << "\n";
    out << "modularity:  " << csv::format_double(p.modularity, 6) << "\n";
    out << "sizes:";
    for (int s : sizes) out << " " << s;
    out << "\n";
    return out.str();
}

}  // namespace stratmob
