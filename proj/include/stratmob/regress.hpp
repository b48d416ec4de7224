#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stratmob {

/// Column-oriented analysis table.
struct DataTable {
    std::size_t n = 0;
    std::map<std::string, std::vector<double>> numeric;
    std::map<std::string, std::vector<std::string>> categorical;

    bool has(const std::string& name) const {
        return numeric.count(name) > 0 || categorical.count(name) > 0;
    }
};

struct Term {
    enum class Kind { numeric, categorical, interaction };
    Kind kind = Kind::numeric;
    std::string a;
    std::string b;       // second operand for interactions
    std::string label;   // display label; defaults to the column name

    static Term num(std::string col, std::string label = "");
    static Term cat(std::string col);
    static Term inter(std::string a, std::string b, std::string label = "");
};

struct ModelSpec {
    std::string name;        // e.g. "(1)"
    std::string dependent;
    std::vector<Term> terms;
    std::vector<std::string> fixed_effects;                // categorical columns
    std::map<std::string, std::string> reference_levels;   // categorical -> omitted level
};

struct DesignMatrix {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<std::string> labels;          // one per column of X
    std::vector<bool> is_fixed_effect;        // per column
    std::vector<std::string> dropped;         // collinear or degenerate columns
    std::vector<std::string> warnings;
};

/// Builds intercept + dummy-coded design in spec order. Exactly collinear
/// columns are dropped (later columns lose), detected by sequential
/// orthogonalization with relative tolerance 1e-10.
DesignMatrix design_matrix(const DataTable& table, const ModelSpec& spec);

struct TermEstimate {
    std::string label;
    double coef = 0.0;
    double se = 0.0;
    double t = 0.0;
    double p = 1.0;
    std::string stars;       // "" | "*" | "**" | "***"
    bool is_fixed_effect = false;
};

struct RegressionResult {
    std::string name;
    std::string dependent;
    std::vector<TermEstimate> estimates;
    std::size_t n = 0;
    Eigen::Index rank = 0;
    long residual_df = 0;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    double residual_se = 0.0;
    std::vector<std::string> dropped;
    std::vector<std::string> fixed_effects;   // note line content
    Eigen::VectorXd fitted;
};

struct OlsOptions {
    std::optional<std::vector<double>> weights;       // WLS when set
    std::optional<std::vector<std::string>> cluster;  // cluster-robust SEs when set
};

std::string significance_stars(double p);

/// Least squares via Householder QR (no explicit normal equations); classical
/// SEs from the R factor, two-sided p-values from the t distribution.
RegressionResult ols(const DesignMatrix& design, const OlsOptions& options = {});

RegressionResult fit(const DataTable& table, const ModelSpec& spec,
                     const OlsOptions& options = {});

struct FamilyOptions {
    std::string reference_social_group;  // empty = first sorted level
    bool weighted = false;
    bool clustered = false;
};

/// The five nested social-distance specifications (dependent "dij").
std::vector<RegressionResult> model_family_a(const DataTable& table,
                                             const FamilyOptions& options = {});
/// The three economic-distance specifications (dependent "EDij"),
/// column (3) adding the dij*Eij interaction.
std::vector<RegressionResult> model_family_b(const DataTable& table,
                                             const FamilyOptions& options = {});

/// Publication-style text table: one column per model, "coef^stars (se)"
/// cells rounded to 3 decimals, footer with Observations, R2, Adjusted R2,
/// Residual Std. Error, and the fixed-effects note.
std::string regression_table(const std::vector<RegressionResult>& results,
                             const std::string& dependent_label);

/// Machine-readable companion: model, term, coef, se, t, p, stars per row.
void write_regression_csv(const std::string& path,
                          const std::vector<RegressionResult>& results);

}  // namespace stratmob
