#include "stratmob/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "stratmob/community.hpp"
#include "stratmob/csv.hpp"
#include "stratmob/layout.hpp"
#include "stratmob/regress.hpp"

namespace fs = std::filesystem;

namespace stratmob {

namespace {

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void require_file(const std::string& path) {
    if (!fs::exists(path)) throw UsageError("missing prerequisite file: " + path);
}

std::string timestamp_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct SurveyData {
    std::vector<IndividualRecord> records;
    LoadReport report;
};

SurveyData load_input(const PipelineOptions& opt) {
    if (opt.input.empty()) throw UsageError("no input file given");
    if (!fs::exists(opt.input)) throw UsageError("input file not found: " + opt.input);
    SurveyData data;
    data.records = load_survey(opt.input, opt.columns, data.report, opt.strict);
    return data;
}

std::set<std::string> surviving_codes(const std::vector<Household>& households) {
    std::set<std::string> codes;
    for (const auto& h : households)
        codes.insert(h.occupation_set.begin(), h.occupation_set.end());
    return codes;
}

/// clean.csv -> StrengthMatrix, with the filter diagnostics appended to diag.
StrengthMatrix build_network(const std::vector<IndividualRecord>& records,
                             const PipelineOptions& opt, std::ostream& diag) {
    auto households = group_households(records);
    auto [kept, dropped] = filter_rare_occupations(households, opt.min_households);
    diag << "households: " << households.size() << "\n";
    diag << "dropped occupations (< " << opt.min_households << " households): " << dropped.size();
    for (const auto& code : dropped) diag << " " << code;
    diag << "\n";
    auto codes = surviving_codes(kept);
    if (codes.empty()) throw UsageError("no occupation codes survive the rarity filter");
    return project(build_incidence(kept, codes), opt.h_mode);
}

OccupationGraph graph_from_edges(const std::string& edges_path, const PipelineOptions& opt) {
    return to_graph(read_edges_csv(edges_path), opt.length_rule);
}

std::vector<MobilityRecord> build_mobility(const std::vector<IndividualRecord>& records,
                                           const DistanceMatrix& D, const PipelineOptions& opt,
                                           ExclusionReport& report) {
    auto households = group_households(records);
    auto mpce = occupation_mpce(records);
    MobilityOptions mopt;
    mopt.origin_rule = opt.origin_rule;
    mopt.ed_mode = opt.ed_mode;
    mopt.dij_scale = opt.dij_scale;
    return build_mobility_table(households, D, mpce, report, mopt);
}

std::string regression_report(const std::vector<MobilityRecord>& records,
                              const PipelineOptions& opt) {
    DataTable table = to_data_table(records);
    FamilyOptions fopt;
    fopt.reference_social_group = opt.reference_social_group;
    fopt.weighted = opt.weighted_regression;
    fopt.clustered = opt.clustered;
    auto fam_a = model_family_a(table, fopt);
    auto fam_b = model_family_b(table, fopt);
    return regression_table(fam_a, "Social distance (dij)") + "\n" +
           regression_table(fam_b, "Economic distance (EDij)");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

double svg_threshold(const OccupationGraph& g, double quantile) {
    return g.edges.empty() ? 0.0 : strength_quantile(g, quantile);
}

/// One complete run (no grouping) into `dir`. `records` already loaded.
void run_all_stages(const std::vector<IndividualRecord>& records, const LoadReport& report,
                    const PipelineOptions& opt, const std::string& dir, std::string& stage,
                    const std::string& stage_prefix = "") {
    std::ostringstream diag;
    stage = stage_prefix + "ingest";
    diag << report.to_text();

    stage = stage_prefix + "network";
    StrengthMatrix s = build_network(records, opt, diag);
    write_edges_csv(join(dir, "edges.csv"), s);
    // Re-read so downstream values match a stage-wise run over the same files.
    OccupationGraph g = graph_from_edges(join(dir, "edges.csv"), opt);

    stage = stage_prefix + "distances";
    write_distances_long_csv(join(dir, "distances.csv"), geodesic_all_pairs(g));
    // Dijkstra from i and from j can differ in the last ulp; the long CSV
    // keeps one triangle, so read it back to use exactly what a stage-wise
    // run would see.
    DistanceMatrix D = read_distances_long_csv(join(dir, "distances.csv"));

    stage = stage_prefix + "communities";
    CommunityPartition part = louvain(g, opt.seed, opt.resolution);
    write_communities_csv(join(dir, "communities.csv"), g, part);
    diag << community_summary(g, part);

    stage = stage_prefix + "layout";
    LayoutResult layout = fruchterman_reingold(g, opt.layout_width, opt.layout_height,
                                               opt.layout_iterations, opt.seed);
    write_positions_csv(join(dir, "positions.csv"), layout);
    write_text(join(dir, "network.svg"),
               render_svg(g, layout, part, svg_threshold(g, opt.edge_quantile)));

    stage = stage_prefix + "mobility";
    ExclusionReport excl;
    auto mobility = build_mobility(records, D, opt, excl);
    write_mobility_csv(join(dir, "mobility.csv"), mobility);
    diag << excl.to_text();

    stage = stage_prefix + "regress";
    write_text(join(dir, "regressions.txt"), regression_report(mobility, opt));

    stage = stage_prefix + "finalize";
    write_text(join(dir, "diagnostics.txt"), diag.str());
    write_text(join(dir, "manifest.txt"), manifest_text(opt));
}

/// Per-record value of the grouping column; throws UsageError on unknown
/// columns.
std::string group_value(const IndividualRecord& r, const std::string& column) {
    if (column == "social_group") return r.social_group;
    if (column == "state") return r.state;
    if (column == "urban") return r.urban ? "urban" : "rural";
    if (column == "sex") return r.is_female ? "female" : "male";
    throw UsageError("cannot group by column: " + column);
}

std::string sanitize_dir_name(const std::string& value) {
    std::string out = value.empty() ? std::string("empty") : value;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
    return out;
}

}  // namespace

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("input file not found: " + path);
    std::uint64_t h = 14695981039346656037ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

std::string manifest_text(const PipelineOptions& opt) {
    std::ostringstream out;
    out << "tool: stratmob " << kToolVersion << "\n";
    out << "input: " << opt.input << "\n";
    out << "input_digest: " << (opt.input.empty() ? "-" : file_digest(opt.input)) << "\n";
    out << "seed: " << opt.seed << "\n";
    out << "min_households: " << opt.min_households << "\n";
    out << "h_mode: " << to_string(opt.h_mode) << "\n";
    out << "length_rule: " << to_string(opt.length_rule) << "\n";
    out << "resolution: " << csv::format_double(opt.resolution, 6) << "\n";
    out << "layout: " << csv::format_double(opt.layout_width, 6) << "x"
        << csv::format_double(opt.layout_height, 6) << " iterations="
        << opt.layout_iterations << "\n";
    out << "edge_quantile: " << csv::format_double(opt.edge_quantile, 6) << "\n";
    out << "origin_rule: " << to_string(opt.origin_rule) << "\n";
    out << "ed_mode: " << to_string(opt.ed_mode) << "\n";
    out << "dij_scale: " << csv::format_double(opt.dij_scale, 6) << "\n";
    out << "reference_social_group: "
        << (opt.reference_social_group.empty() ? "-" : opt.reference_social_group) << "\n";
    out << "weighted: " << (opt.weighted_regression ? 1 : 0) << "\n";
    out << "clustered: " << (opt.clustered ? 1 : 0) << "\n";
    out << "group_by: " << (opt.group_by.empty() ? "-" : opt.group_by) << "\n";
    out << "strict: " << (opt.strict ? 1 : 0) << "\n";
    if (!opt.deterministic) out << "timestamp: " << timestamp_now() << "\n";
    return out.str();
}

void run_stage(const std::string& stage, const PipelineOptions& opt, std::ostream& out) {
    fs::create_directories(opt.out_dir);
    const std::string dir = opt.out_dir;

    if (stage == "ingest") {
        SurveyData data = load_input(opt);
        write_canonical_csv(join(dir, "clean.csv"), data.records);
        out << data.report.to_text();
        return;
    }
    if (stage == "network") {
        require_file(join(dir, "clean.csv"));
        LoadReport report;
        auto records = load_survey(join(dir, "clean.csv"), ColumnMap{}, report, true);
        std::ostringstream diag;
        StrengthMatrix s = build_network(records, opt, diag);
        write_edges_csv(join(dir, "edges.csv"), s);
        out << diag.str();
        out << "occupations: " << s.occupations.size() << "\n";
        return;
    }
    if (stage == "distances") {
        require_file(join(dir, "edges.csv"));
        OccupationGraph g = graph_from_edges(join(dir, "edges.csv"), opt);
        DistanceMatrix D = geodesic_all_pairs(g);
        write_distances_long_csv(join(dir, "distances.csv"), D);
        out << "nodes: " << g.nodes.size() << "\nedges: " << g.edges.size() << "\n";
        return;
    }
    if (stage == "communities") {
        require_file(join(dir, "edges.csv"));
        OccupationGraph g = graph_from_edges(join(dir, "edges.csv"), opt);
        CommunityPartition part = louvain(g, opt.seed, opt.resolution);
        write_communities_csv(join(dir, "communities.csv"), g, part);
        out << community_summary(g, part);
        return;
    }
    if (stage == "layout") {
        require_file(join(dir, "edges.csv"));
        require_file(join(dir, "communities.csv"));
        OccupationGraph g = graph_from_edges(join(dir, "edges.csv"), opt);
        CommunityPartition part = read_communities_csv(join(dir, "communities.csv"), g);
        LayoutResult layout = fruchterman_reingold(g, opt.layout_width, opt.layout_height,
                                                   opt.layout_iterations, opt.seed);
        write_positions_csv(join(dir, "positions.csv"), layout);
        write_text(join(dir, "network.svg"),
                   render_svg(g, layout, part, svg_threshold(g, opt.edge_quantile)));
        out << "layout: " << layout.nodes.size() << " nodes placed\n";
        return;
    }
    if (stage == "mobility") {
        require_file(join(dir, "clean.csv"));
        require_file(join(dir, "distances.csv"));
        LoadReport report;
        auto records = load_survey(join(dir, "clean.csv"), ColumnMap{}, report, true);
        DistanceMatrix D = read_distances_long_csv(join(dir, "distances.csv"));
        ExclusionReport excl;
        auto mobility = build_mobility(records, D, opt, excl);
        write_mobility_csv(join(dir, "mobility.csv"), mobility);
        out << excl.to_text();
        return;
    }
    if (stage == "regress") {
        require_file(join(dir, "mobility.csv"));
        auto mobility = read_mobility_csv(join(dir, "mobility.csv"));
        std::string report = regression_report(mobility, opt);
        write_text(join(dir, "regressions.txt"), report);
        out << report;
        return;
    }
    throw UsageError("unknown stage: " + stage);
}

int run_pipeline(const PipelineOptions& opt, std::ostream& err) {
    std::string stage = "setup";
    std::string dir = opt.out_dir;
    bool dir_created = false;
    try {
        SurveyData data = load_input(opt);
        fs::create_directories(dir);
        dir_created = true;

        std::vector<std::string> groups;
        if (!opt.group_by.empty()) {
            std::set<std::string> values;
            for (const auto& r : data.records) values.insert(group_value(r, opt.group_by));
            if (values.size() > 1) groups.assign(values.begin(), values.end());
        }

        if (groups.empty()) {
            run_all_stages(data.records, data.report, opt, dir, stage);
            return 0;
        }

        for (const auto& value : groups) {
            stage = "group " + value;
            std::vector<IndividualRecord> subset;
            for (const auto& r : data.records)
                if (group_value(r, opt.group_by) == value) subset.push_back(r);
            std::string sub_dir = join(dir, sanitize_dir_name(value));
            fs::create_directories(sub_dir);
            run_all_stages(subset, data.report, opt, sub_dir, stage, "group " + value + ": ");
        }
        std::ostringstream top;
        top << manifest_text(opt);
        top << "groups:";
        for (const auto& value : groups) top << " " << sanitize_dir_name(value);
        top << "\n";
        write_text(join(dir, "manifest.txt"), top.str());
        return 0;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error in stage " << stage << ": " << e.what() << "\n";
        if (dir_created)
            write_text(join(dir, "FAILED"), "stage: " + stage + "\nerror: " + e.what() + "\n");
        return 1;
    }
}

}  // namespace stratmob
