#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <sstream>

#include "stratmob/community.hpp"
#include "stratmob/csv.hpp"
#include "stratmob/layout.hpp"
#include "stratmob/pipeline.hpp"
#include "stratmob/project.hpp"
#include "stratmob/regress.hpp"
#include "stratmob/synth.hpp"

namespace py = pybind11;
using namespace stratmob;

namespace {

/// V plus node codes is all the graph stages need; U is not consulted
/// downstream of the projection.
OccupationGraph graph_from_v(const Eigen::MatrixXd& V, const std::vector<std::string>& codes,
                             const std::string& length_rule) {
    StrengthMatrix s;
    s.occupations = codes;
    s.V = V;
    s.U = V;
    return to_graph(s, length_rule_from_string(length_rule));
}

IncidenceMatrix incidence_from_dense(const Eigen::MatrixXd& A, const std::vector<double>& weights,
                                     const std::vector<std::string>& codes) {
    if (A.rows() != static_cast<Eigen::Index>(weights.size()))
        throw std::invalid_argument("one weight per household row required");
    if (A.cols() != static_cast<Eigen::Index>(codes.size()))
        throw std::invalid_argument("one code per occupation column required");
    IncidenceMatrix m;
    m.occupations = codes;
    for (Eigen::Index k = 0; k < A.rows(); ++k) {
        std::vector<int> row;
        for (Eigen::Index i = 0; i < A.cols(); ++i)
            if (A(k, i) != 0.0) row.push_back(static_cast<int>(i));
        m.households.push_back("H" + std::to_string(k));
        m.rows.push_back(std::move(row));
        m.weights.push_back(weights[static_cast<std::size_t>(k)]);
    }
    return m;
}

PipelineOptions options_from_kwargs(const std::string& input, const std::string& out_dir,
                                    std::uint64_t seed, bool deterministic, int min_households,
                                    const std::string& length_rule, const std::string& h_mode,
                                    const std::string& group_by) {
    PipelineOptions opt;
    opt.input = input;
    opt.out_dir = out_dir;
    opt.seed = seed;
    opt.deterministic = deterministic;
    opt.min_households = min_households;
    opt.length_rule = length_rule_from_string(length_rule);
    opt.h_mode = h_mode_from_string(h_mode);
    opt.group_by = group_by;
    return opt;
}

}  // namespace

PYBIND11_MODULE(_stratmob, m) {
    m.doc() = "Occupational network and social mobility toolkit";
    m.attr("__version__") = kToolVersion;

    m.def(
        "project",
        [](const Eigen::MatrixXd& A, const std::vector<double>& weights,
           const std::vector<std::string>& codes, const std::string& h_mode) {
            StrengthMatrix s =
                stratmob::project(incidence_from_dense(A, weights, codes),
                                  h_mode_from_string(h_mode));
            return py::make_tuple(s.U, s.V);
        },
        py::arg("incidence"), py::arg("weights"), py::arg("codes"),
        py::arg("h_mode") = "weighted",
        "Chi-square projection of a household-by-occupation incidence matrix; "
        "returns (U, V).");

    m.def(
        "geodesics",
        [](const Eigen::MatrixXd& V, const std::vector<std::string>& codes,
           const std::string& length_rule) {
            return geodesic_all_pairs(graph_from_v(V, codes, length_rule)).d;
        },
        py::arg("V"), py::arg("codes"), py::arg("length_rule") = "reciprocal",
        "All-pairs geodesic distances over the positive-strength graph; "
        "disconnected pairs are +inf.");

    m.def(
        "louvain",
        [](const Eigen::MatrixXd& V, const std::vector<std::string>& codes, std::uint64_t seed,
           double resolution, const std::string& length_rule) {
            CommunityPartition p =
                louvain(graph_from_v(V, codes, length_rule), seed, resolution);
            return py::make_tuple(p.assignment, p.modularity);
        },
        py::arg("V"), py::arg("codes"), py::arg("seed") = 0, py::arg("resolution") = 1.0,
        py::arg("length_rule") = "reciprocal",
        "Louvain community detection; returns (assignment, modularity).");

    m.def(
        "layout",
        [](const Eigen::MatrixXd& V, const std::vector<std::string>& codes, double width,
           double height, int iterations, std::uint64_t seed, const std::string& length_rule) {
            LayoutResult r = fruchterman_reingold(graph_from_v(V, codes, length_rule), width,
                                                  height, iterations, seed);
            return py::make_tuple(r.x, r.y);
        },
        py::arg("V"), py::arg("codes"), py::arg("width") = 1200.0, py::arg("height") = 900.0,
        py::arg("iterations") = 500, py::arg("seed") = 0, py::arg("length_rule") = "reciprocal",
        "Force-directed node positions; returns (x, y).");

    m.def("adjusted_rand_index", &adjusted_rand_index, py::arg("a"), py::arg("b"),
          "Chance-corrected agreement between two labelings.");

    m.def(
        "ols",
        [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
           const std::vector<std::string>& labels) {
            DesignMatrix d;
            d.X = X;
            d.y = y;
            d.labels = labels.empty()
                           ? std::vector<std::string>(static_cast<std::size_t>(X.cols()), "x")
                           : labels;
            d.is_fixed_effect.assign(static_cast<std::size_t>(X.cols()), false);
            RegressionResult r = stratmob::ols(d);
            py::dict out;
            std::vector<double> coef, se, p;
            for (const auto& e : r.estimates) {
                coef.push_back(e.coef);
                se.push_back(e.se);
                p.push_back(e.p);
            }
            out["coef"] = coef;
            out["se"] = se;
            out["p"] = p;
            out["r2"] = r.r2;
            out["adj_r2"] = r.adj_r2;
            return out;
        },
        py::arg("X"), py::arg("y"), py::arg("labels") = std::vector<std::string>{},
        "Least squares on an explicit design matrix; returns coef/se/p/r2.");

    m.def(
        "generate_synth",
        [](const std::string& out_dir, int households, int occupations, int blocks, double beta,
           double gamma, std::uint64_t seed) {
            SynthConfig cfg;
            cfg.n_households = households;
            cfg.n_occupations = occupations;
            cfg.n_blocks = blocks;
            cfg.planted_beta_education = beta;
            cfg.planted_gamma_interaction = gamma;
            cfg.seed = seed;
            SynthResult r = generate(cfg);
            std::filesystem::create_directories(out_dir);
            auto base = std::filesystem::path(out_dir);
            write_synth_csv((base / "synth.csv").string(), (base / "synth_truth.csv").string(), r);
            py::dict out;
            out["records"] = r.records.size();
            out["planted_beta"] = r.planted_beta;
            out["achieved_beta"] = r.achieved_beta;
            out["planted_gamma"] = r.planted_gamma;
            out["achieved_gamma"] = r.achieved_gamma;
            out["path"] = (base / "synth.csv").string();
            return out;
        },
        py::arg("out_dir"), py::arg("households") = 2000, py::arg("occupations") = 32,
        py::arg("blocks") = 4, py::arg("beta") = 3.0, py::arg("gamma") = 5.0,
        py::arg("seed") = 42,
        "Writes a planted-truth synthetic survey plus its truth sidecar.");

    m.def(
        "run_pipeline",
        [](const std::string& input, const std::string& out_dir, std::uint64_t seed,
           bool deterministic, int min_households, const std::string& length_rule,
           const std::string& h_mode, const std::string& group_by) {
            std::ostringstream err;
            int code = run_pipeline(options_from_kwargs(input, out_dir, seed, deterministic,
                                                        min_households, length_rule, h_mode,
                                                        group_by),
                                    err);
            if (code != 0) throw std::runtime_error(err.str());
            return out_dir;
        },
        py::arg("input"), py::arg("out_dir"), py::arg("seed") = 42,
        py::arg("deterministic") = false, py::arg("min_households") = 10,
        py::arg("length_rule") = "reciprocal", py::arg("h_mode") = "weighted",
        py::arg("group_by") = "",
        "Full survey-to-regressions run; returns the output directory.");

    m.def(
        "run_stage",
        [](const std::string& stage, const std::string& input, const std::string& out_dir,
           std::uint64_t seed, bool deterministic, int min_households,
           const std::string& length_rule, const std::string& h_mode) {
            std::ostringstream diag;
            run_stage(stage,
                      options_from_kwargs(input, out_dir, seed, deterministic, min_households,
                                          length_rule, h_mode, ""),
                      diag);
            return diag.str();
        },
        py::arg("stage"), py::arg("input") = "", py::arg("out_dir") = "out", py::arg("seed") = 42,
        py::arg("deterministic") = false, py::arg("min_households") = 10,
        py::arg("length_rule") = "reciprocal", py::arg("h_mode") = "weighted",
        "One file-based stage; returns its diagnostics text.");
}
