#include "stratmob/layout.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stratmob/csv.hpp"
#include "stratmob/rng.hpp"

namespace stratmob {

LayoutResult fruchterman_reingold(const OccupationGraph& g, double width, double height,
                                  int iterations, std::uint64_t seed) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("frame must be positive");
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    const std::size_t n = g.node_count();

    LayoutResult out;
    out.nodes = g.nodes;
    out.width = width;
    out.height = height;
    out.iterations = iterations;
    out.seed = seed;
    out.x.resize(n);
    out.y.resize(n);
    if (n == 0) return out;

    // Seeded uniform placement, then recentred so the centroid sits exactly
    // at the frame midpoint. A single node therefore lands dead centre.
    Rng rng(seed);
    double cx = 0, cy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.x[i] = rng.uniform(0.25 * width, 0.75 * width);
        out.y[i] = rng.uniform(0.25 * height, 0.75 * height);
        cx += out.x[i];
        cy += out.y[i];
    }
    cx = cx / static_cast<double>(n) - width / 2.0;
    cy = cy / static_cast<double>(n) - height / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.x[i] -= cx;
        out.y[i] -= cy;
    }
    if (n == 1) return out;

    const double k = std::sqrt(width * height / static_cast<double>(n));
    double mean_strength = 0.0;
    for (const auto& e : g.edges) mean_strength += e.strength;
    mean_strength = g.edges.empty() ? 1.0 : mean_strength / static_cast<double>(g.edges.size());

    const double t0 = width / 10.0;
    std::vector<double> dx(n), dy(n);
    for (int iter = 0; iter < iterations; ++iter) {
        const double t = t0 * (1.0 - static_cast<double>(iter) / static_cast<double>(iterations));
        std::fill(dx.begin(), dx.end(), 0.0);
        std::fill(dy.begin(), dy.end(), 0.0);

        // repulsion k^2/d between all pairs
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double ux = out.x[i] - out.x[j];
                double uy = out.y[i] - out.y[j];
                double d = std::sqrt(ux * ux + uy * uy);
                if (d < 1e-9) {  // coincident nodes: deterministic nudge
                    ux = 1e-6 * (static_cast<double>(i) + 1.0);
                    uy = 1e-6;
                    d = std::sqrt(ux * ux + uy * uy);
                }
                const double f = k * k / d;
                dx[i] += ux / d * f;
                dy[i] += uy / d * f;
                dx[j] -= ux / d * f;
                dy[j] -= uy / d * f;
            }

        // attraction d^2/k along edges, scaled by mean-normalized strength
        for (const auto& e : g.edges) {
            const std::size_t a = static_cast<std::size_t>(e.a);
            const std::size_t b = static_cast<std::size_t>(e.b);
            double ux = out.x[a] - out.x[b];
            double uy = out.y[a] - out.y[b];
            double d = std::sqrt(ux * ux + uy * uy);
            if (d < 1e-9) continue;
            const double f = d * d / k * (e.strength / mean_strength);
            dx[a] -= ux / d * f;
            dy[a] -= uy / d * f;
            dx[b] += ux / d * f;
            dy[b] += uy / d * f;
        }

        for (std::size_t i = 0; i < n; ++i) {
            const double norm = std::sqrt(dx[i] * dx[i] + dy[i] * dy[i]);
            if (norm > 1e-12) {
                const double step = std::min(norm, t);
                out.x[i] += dx[i] / norm * step;
                out.y[i] += dy[i] / norm * step;
            }
            out.x[i] = std::clamp(out.x[i], 0.0, width);
            out.y[i] = std::clamp(out.y[i], 0.0, height);
        }
    }
    return out;
}

namespace {

const char* kPalette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
                          "#a65628", "#f781bf", "#17becf", "#bcbd22", "#999999"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace

std::string render_svg(const OccupationGraph& g, const LayoutResult& layout,
                       const CommunityPartition& partition, double strength_threshold) {
    if (layout.x.size() != g.node_count())
        throw std::invalid_argument("layout does not cover all nodes");

    double smin = 0.0, smax = 0.0;
    if (!g.edges.empty()) {
        smin = smax = g.edges.front().strength;
        for (const auto& e : g.edges) {
            smin = std::min(smin, e.strength);
            smax = std::max(smax, e.strength);
        }
    }
    auto stroke = [&](double s) {
        if (smax <= smin) return 3.25;  // degenerate distribution
        return 0.5 + 5.5 * (s - smin) / (smax - smin);
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(layout.width)
        << "\" height=\"" << fmt(layout.height) << "\" viewBox=\"0 0 " << fmt(layout.width) << " "
        << fmt(layout.height) << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n  <g id=\"edges\">\n";
    for (const auto& e : g.edges) {
        if (!(e.strength > strength_threshold)) continue;
        const std::size_t a = static_cast<std::size_t>(e.a);
        const std::size_t b = static_cast<std::size_t>(e.b);
        svg << "    <line x1=\"" << fmt(layout.x[a]) << "\" y1=\"" << fmt(layout.y[a]) << "\" x2=\""
            << fmt(layout.x[b]) << "\" y2=\"" << fmt(layout.y[b]) << "\" stroke=\"#777777\""
            << " stroke-width=\"" << fmt(stroke(e.strength)) << "\" stroke-opacity=\"0.6\"/>\n";
    }
    svg << "  </g>\n  <g id=\"nodes\">\n";
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const int c = i < partition.assignment.size() ? partition.assignment[i] : 0;
        const char* color = kPalette[static_cast<std::size_t>(c) % 10];
        svg << "    <g id=\"node-" << g.nodes[i] << "\"><circle cx=\"" << fmt(layout.x[i])
            << "\" cy=\"" << fmt(layout.y[i]) << "\" r=\"9\" fill=\"" << color
            << "\" stroke=\"#333333\"/><text x=\"" << fmt(layout.x[i]) << "\" y=\""
            << fmt(layout.y[i] + 3.5) << "\" font-size=\"9\" font-family=\"sans-serif\""
            << " text-anchor=\"middle\" fill=\"white\">" << g.nodes[i] << "</text></g>\n";
    }
    svg << "  </g>\n</svg>\n";
    return svg.str();
}

void write_positions_csv(const std::string& path, const LayoutResult& layout) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < layout.nodes.size(); ++i)
        rows.push_back({layout.nodes[i], csv::format_exact(layout.x[i]),
                        csv::format_exact(layout.y[i])});
    csv::write_file(path, {"occ2", "x", "y"}, rows);
}

}  // namespace stratmob
