#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "stratmob/pipeline.hpp"
#include "stratmob/synth.hpp"

namespace {

/// Options shared by every subcommand that touches the pipeline files.
void add_common_options(CLI::App* cmd, stratmob::PipelineOptions& opt) {
    cmd->add_option("-o,--out", opt.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
    cmd->add_flag("--deterministic", opt.deterministic,
                  "Omit timestamps so reruns are byte-identical");
    cmd->add_option("--min-households", opt.min_households,
                    "Drop occupations seen in fewer distinct households")
        ->capture_default_str();
    cmd->add_option("--h-mode", [&opt](const CLI::results_t& res) {
            opt.h_mode = stratmob::h_mode_from_string(res[0]);
            return true;
        },
        "Normalization total: weighted | count");
    cmd->add_option("--length-rule", [&opt](const CLI::results_t& res) {
            opt.length_rule = stratmob::length_rule_from_string(res[0]);
            return true;
        },
        "Edge length rule: reciprocal | neglog | unit");
    cmd->add_option("--resolution", opt.resolution, "Louvain resolution")->capture_default_str();
    cmd->add_option("--layout-width", opt.layout_width, "Layout frame width")
        ->capture_default_str();
    cmd->add_option("--layout-height", opt.layout_height, "Layout frame height")
        ->capture_default_str();
    cmd->add_option("--layout-iterations", opt.layout_iterations, "Layout iterations")
        ->capture_default_str();
    cmd->add_option("--edge-quantile", opt.edge_quantile,
                    "Strength quantile below which SVG edges are hidden")
        ->capture_default_str();
    cmd->add_option("--origin-rule", [&opt](const CLI::results_t& res) {
            opt.origin_rule = stratmob::origin_rule_from_string(res[0]);
            return true;
        },
        "Origin member rule: edu_then_age | age_then_edu");
    cmd->add_option("--ed-mode", [&opt](const CLI::results_t& res) {
            opt.ed_mode = stratmob::ed_mode_from_string(res[0]);
            return true;
        },
        "Economic distance: signed | absolute");
    cmd->add_option("--dij-scale", opt.dij_scale, "Social distance scale factor")
        ->capture_default_str();
    cmd->add_option("--reference-group", opt.reference_social_group,
                    "Omitted social group in the regressions");
    cmd->add_flag("--weighted", opt.weighted_regression, "Weight regressions by hh_weight");
    cmd->add_flag("--clustered", opt.clustered, "Cluster regression SEs by household");
    cmd->add_flag("--strict", opt.strict, "Abort ingest on the first invalid row");
    cmd->set_config("--config", "", "INI config file (key=value)");
}

void add_column_options(CLI::App* cmd, stratmob::ColumnMap& columns) {
    cmd->add_option("--col-hh-id", columns.hh_id, "Household id column");
    cmd->add_option("--col-person-id", columns.person_id, "Person id column");
    cmd->add_option("--col-hh-weight", columns.hh_weight, "Household weight column");
    cmd->add_option("--col-state", columns.state, "State column");
    cmd->add_option("--col-urban", columns.urban, "Urban flag column");
    cmd->add_option("--col-social-group", columns.social_group, "Social group column");
    cmd->add_option("--col-sex", columns.sex, "Sex column");
    cmd->add_option("--col-age", columns.age, "Age column");
    cmd->add_option("--col-edu-years", columns.edu_years, "Education years column");
    cmd->add_option("--col-working", columns.working, "Working flag column");
    cmd->add_option("--col-occ2", columns.occ2, "Occupation code column");
    cmd->add_option("--col-assets", columns.assets, "Assets column");
    cmd->add_option("--col-mpce", columns.mpce, "MPCE column");
}

int run_one_stage(const std::string& stage, const stratmob::PipelineOptions& opt) {
    try {
        stratmob::run_stage(stage, opt, std::cout);
        return 0;
    } catch (const stratmob::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_synth(const stratmob::SynthConfig& config, const std::string& out_dir) {
    try {
        stratmob::SynthResult result = stratmob::generate(config);
        std::filesystem::create_directories(out_dir);
        auto records_path = (std::filesystem::path(out_dir) / "synth.csv").string();
        auto truth_path = (std::filesystem::path(out_dir) / "synth_truth.csv").string();
        stratmob::write_synth_csv(records_path, truth_path, result);
        std::cout << "records: " << result.records.size() << "\n"
                  << "occupations: " << result.occupations.size() << "\n"
                  << "planted_beta: " << result.planted_beta << "\n"
                  << "achieved_beta: " << result.achieved_beta << "\n"
                  << "planted_gamma: " << result.planted_gamma << "\n"
                  << "achieved_gamma: " << result.achieved_gamma << "\n";
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Occupational network and social mobility toolkit"};
    app.require_subcommand(1);

    stratmob::PipelineOptions opt;
    stratmob::SynthConfig synth_config;
    std::string synth_out = "out";

    auto* ingest = app.add_subcommand("ingest", "Validate the survey CSV and write clean.csv");
    ingest->add_option("input", opt.input, "Survey CSV")->required();
    add_common_options(ingest, opt);
    add_column_options(ingest, opt.columns);

    auto* network =
        app.add_subcommand("network", "Project clean.csv into the occupation edges CSV");
    add_common_options(network, opt);

    auto* distances =
        app.add_subcommand("distances", "All-pairs geodesics over the occupation graph");
    add_common_options(distances, opt);

    auto* communities = app.add_subcommand("communities", "Louvain communities of the graph");
    add_common_options(communities, opt);

    auto* layout = app.add_subcommand("layout", "Force-directed positions and the SVG rendering");
    add_common_options(layout, opt);

    auto* mobility =
        app.add_subcommand("mobility", "Per-individual social and economic distances");
    add_common_options(mobility, opt);

    auto* regress = app.add_subcommand("regress", "Fixed-effects regression tables");
    add_common_options(regress, opt);

    auto* pipeline = app.add_subcommand("pipeline", "Full run: ingest through regress");
    pipeline->add_option("input", opt.input, "Survey CSV")->required();
    pipeline->add_option("--group-by", opt.group_by,
                         "Run per group of this column (e.g. social_group)");
    add_common_options(pipeline, opt);
    add_column_options(pipeline, opt.columns);

    auto* synth = app.add_subcommand("synth", "Generate a planted-truth synthetic survey");
    synth->add_option("-o,--out", synth_out, "Output directory")->capture_default_str();
    synth->add_option("--households", synth_config.n_households, "Household count")
        ->capture_default_str();
    synth->add_option("--occupations", synth_config.n_occupations, "Occupation count")
        ->capture_default_str();
    synth->add_option("--blocks", synth_config.n_blocks, "Planted block count")
        ->capture_default_str();
    synth->add_option("--within-tie-prob", synth_config.within_tie_prob,
                      "P(member stays within the origin block)")
        ->capture_default_str();
    synth->add_option("--cross-tie-prob", synth_config.cross_tie_prob,
                      "P(member crosses blocks)")
        ->capture_default_str();
    synth->add_option("--members-min", synth_config.members_min, "Minimum household size")
        ->capture_default_str();
    synth->add_option("--members-max", synth_config.members_max, "Maximum household size")
        ->capture_default_str();
    synth->add_option("--beta", synth_config.planted_beta_education, "Planted education slope")
        ->capture_default_str();
    synth->add_option("--gamma", synth_config.planted_gamma_interaction,
                      "Planted dij*Eij interaction")
        ->capture_default_str();
    synth->add_option("--noise-sd", synth_config.noise_sd, "Distance noise SD")
        ->capture_default_str();
    synth->add_option("--seed", synth_config.seed, "RNG seed")->capture_default_str();
    synth->set_config("--config", "", "INI config file (key=value)");

    CLI11_PARSE(app, argc, argv);

    if (ingest->parsed()) return run_one_stage("ingest", opt);
    if (network->parsed()) return run_one_stage("network", opt);
    if (distances->parsed()) return run_one_stage("distances", opt);
    if (communities->parsed()) return run_one_stage("communities", opt);
    if (layout->parsed()) return run_one_stage("layout", opt);
    if (mobility->parsed()) return run_one_stage("mobility", opt);
    if (regress->parsed()) return run_one_stage("regress", opt);
    if (pipeline->parsed()) return stratmob::run_pipeline(opt, std::cerr);
    if (synth->parsed()) return run_synth(synth_config, synth_out);
    return 2;
}
