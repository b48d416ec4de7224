#include "stratmob/regress.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "stratmob/csv.hpp"

namespace stratmob {

Term Term::num(std::string col, std::string label) {
    Term t;
    t.kind = Kind::numeric;
    t.a = std::move(col);
    t.label = label.empty() ? t.a : std::move(label);
    return t;
}

Term Term::cat(std::string col) {
    Term t;
    t.kind = Kind::categorical;
    t.a = std::move(col);
    t.label = t.a;
    return t;
}

Term Term::inter(std::string a, std::string b, std::string label) {
    Term t;
    t.kind = Kind::interaction;
    t.a = std::move(a);
    t.b = std::move(b);
    t.label = label.empty() ? t.a + "*" + t.b : std::move(label);
    return t;
}

namespace {

const std::vector<double>& numeric_column(const DataTable& table, const std::string& name) {
    auto it = table.numeric.find(name);
    if (it == table.numeric.end())
        throw std::invalid_argument("numeric column not found: " + name);
    return it->second;
}

void append_dummies(const DataTable& table, const std::string& col, const std::string& reference,
                    std::vector<std::pair<std::string, Eigen::VectorXd>>& cols,
                    std::vector<std::string>& warnings, bool fixed_effect,
                    std::vector<bool>& fe_flags) {
    auto it = table.categorical.find(col);
    if (it == table.categorical.end())
        throw std::invalid_argument("categorical column not found: " + col);
    const auto& values = it->second;
    std::set<std::string> levels(values.begin(), values.end());
    if (levels.size() < 2) {
        warnings.push_back("categorical " + col + " has fewer than 2 observed levels; dropped");
        return;
    }
    std::string ref = reference;
    if (ref.empty() || levels.count(ref) == 0) ref = *levels.begin();
    for (const auto& level : levels) {
        if (level == ref) continue;
        Eigen::VectorXd d(static_cast<Eigen::Index>(values.size()));
        for (std::size_t i = 0; i < values.size(); ++i)
            d(static_cast<Eigen::Index>(i)) = values[i] == level ? 1.0 : 0.0;
        cols.emplace_back(fixed_effect ? col + "=" + level : level, std::move(d));
        fe_flags.push_back(fixed_effect);
    }
}

}  // namespace

DesignMatrix design_matrix(const DataTable& table, const ModelSpec& spec) {
    if (table.n == 0) throw std::invalid_argument("empty sample");
    DesignMatrix out;

    const auto& yv = numeric_column(table, spec.dependent);
    out.y = Eigen::Map<const Eigen::VectorXd>(yv.data(), static_cast<Eigen::Index>(yv.size()));
    if (out.y.maxCoeff() == out.y.minCoeff())
        out.warnings.push_back("dependent column " + spec.dependent + " is constant");

    std::vector<std::pair<std::string, Eigen::VectorXd>> cols;
    std::vector<bool> fe_flags;
    cols.emplace_back("(Intercept)",
                      Eigen::VectorXd::Ones(static_cast<Eigen::Index>(table.n)));
    fe_flags.push_back(false);

    auto ref_of = [&](const std::string& c) {
        auto it = spec.reference_levels.find(c);
        return it == spec.reference_levels.end() ? std::string{} : it->second;
    };

    for (const auto& term : spec.terms) {
        switch (term.kind) {
            case Term::Kind::numeric: {
                const auto& v = numeric_column(table, term.a);
                cols.emplace_back(term.label, Eigen::Map<const Eigen::VectorXd>(
                                                  v.data(), static_cast<Eigen::Index>(v.size())));
                fe_flags.push_back(false);
                break;
            }
            case Term::Kind::categorical:
                append_dummies(table, term.a, ref_of(term.a), cols, out.warnings, false, fe_flags);
                break;
            case Term::Kind::interaction: {
                const auto& va = numeric_column(table, term.a);
                const auto& vb = numeric_column(table, term.b);
                Eigen::VectorXd prod(static_cast<Eigen::Index>(table.n));
                for (std::size_t i = 0; i < table.n; ++i)
                    prod(static_cast<Eigen::Index>(i)) = va[i] * vb[i];
                cols.emplace_back(term.label, std::move(prod));
                fe_flags.push_back(false);
                break;
            }
        }
    }
    for (const auto& fe : spec.fixed_effects)
        append_dummies(table, fe, ref_of(fe), cols, out.warnings, true, fe_flags);

    // Sequential (order-respecting) rank detection: a column exactly
    // representable by earlier kept columns is dropped. Modified Gram-Schmidt
    // with one reorthogonalization pass, relative tolerance 1e-10.
    const Eigen::Index n = static_cast<Eigen::Index>(table.n);
    Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(cols.size()));
    Eigen::Index kept = 0;
    std::vector<std::size_t> keep_idx;
    constexpr double tol = 1e-10;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        Eigen::VectorXd v = cols[c].second;
        const double norm0 = v.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index b = 0; b < kept; ++b) v -= basis.col(b).dot(v) * basis.col(b);
        if (norm0 == 0.0 || v.norm() <= tol * norm0) {
            out.dropped.push_back(cols[c].first);
            continue;
        }
        basis.col(kept++) = v / v.norm();
        keep_idx.push_back(c);
    }
    if (kept == 0) throw std::runtime_error("design matrix has rank 0");

    out.X.resize(n, kept);
    for (Eigen::Index j = 0; j < kept; ++j) {
        out.X.col(j) = cols[keep_idx[static_cast<std::size_t>(j)]].second;
        out.labels.push_back(cols[keep_idx[static_cast<std::size_t>(j)]].first);
        out.is_fixed_effect.push_back(fe_flags[keep_idx[static_cast<std::size_t>(j)]]);
    }
    return out;
}

std::string significance_stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.1) return "*";
    return "";
}

RegressionResult ols(const DesignMatrix& design, const OlsOptions& options) {
    const Eigen::Index n = design.X.rows();
    const Eigen::Index p = design.X.cols();
    if (n <= p) throw std::invalid_argument("need more observations than parameters");

    Eigen::MatrixXd X = design.X;
    Eigen::VectorXd y = design.y;
    if (options.weights) {
        if (options.weights->size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("weight vector length mismatch");
        for (Eigen::Index i = 0; i < n; ++i) {
            const double w = (*options.weights)[static_cast<std::size_t>(i)];
            if (w < 0) throw std::invalid_argument("negative weight");
            const double s = std::sqrt(w);
            X.row(i) *= s;
            y(i) *= s;
        }
    }

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    Eigen::VectorXd beta = qr.solve(y);
    Eigen::VectorXd residuals = y - X * beta;

    const double rss = residuals.squaredNorm();
    const double mean_y = y.mean();
    double tss = (y.array() - mean_y).square().sum();
    const long df = static_cast<long>(n - p);
    const double s2 = rss / static_cast<double>(df);

    // (X'X)^-1 = R^-1 R^-T from the QR factor
    Eigen::MatrixXd R = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    Eigen::MatrixXd xtx_inv = Rinv * Rinv.transpose();

    Eigen::VectorXd var = (s2 * xtx_inv.diagonal()).cwiseMax(0.0);
    long se_df = df;
    if (options.cluster) {
        if (options.cluster->size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("cluster vector length mismatch");
        std::map<std::string, Eigen::VectorXd> scores;
        for (Eigen::Index i = 0; i < n; ++i) {
            auto [it, fresh] =
                scores.try_emplace((*options.cluster)[static_cast<std::size_t>(i)],
                                   Eigen::VectorXd::Zero(p));
            it->second += X.row(i).transpose() * residuals(i);
        }
        const double g = static_cast<double>(scores.size());
        if (g < 2) throw std::invalid_argument("clustered SEs need at least 2 clusters");
        Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(p, p);
        for (const auto& [id, s] : scores) meat += s * s.transpose();
        const double adj = g / (g - 1.0) * static_cast<double>(n - 1) /
                           static_cast<double>(n - p);
        Eigen::MatrixXd cov = adj * xtx_inv * meat * xtx_inv;
        var = cov.diagonal().cwiseMax(0.0);
        se_df = static_cast<long>(g) - 1;
    }

    RegressionResult out;
    out.n = static_cast<std::size_t>(n);
    out.rank = p;
    out.residual_df = df;
    out.r2 = tss > 0 ? 1.0 - rss / tss : 0.0;
    out.adj_r2 = tss > 0 ? 1.0 - (1.0 - out.r2) * static_cast<double>(n - 1) /
                               static_cast<double>(df)
                         : 0.0;
    out.residual_se = std::sqrt(s2);
    out.dropped = design.dropped;
    out.fitted = design.X * beta;

    boost::math::students_t dist(static_cast<double>(se_df));
    for (Eigen::Index j = 0; j < p; ++j) {
        TermEstimate e;
        e.label = design.labels[static_cast<std::size_t>(j)];
        e.is_fixed_effect = design.is_fixed_effect[static_cast<std::size_t>(j)];
        e.coef = beta(j);
        e.se = std::sqrt(var(j));
        if (e.se > 0) {
            e.t = e.coef / e.se;
            e.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(e.t)));
        } else {
            e.t = 0.0;
            e.p = 1.0;
        }
        e.stars = significance_stars(e.p);
        out.estimates.push_back(std::move(e));
    }
    return out;
}

RegressionResult fit(const DataTable& table, const ModelSpec& spec, const OlsOptions& options) {
    DesignMatrix design = design_matrix(table, spec);
    RegressionResult r = ols(design, options);
    r.name = spec.name;
    r.dependent = spec.dependent;
    r.fixed_effects = spec.fixed_effects;
    return r;
}

namespace {

OlsOptions family_options(const DataTable& table, const FamilyOptions& o) {
    OlsOptions opts;
    if (o.weighted) {
        auto it = table.numeric.find("hh_weight");
        if (it == table.numeric.end())
            throw std::invalid_argument("weighted estimation needs an hh_weight column");
        opts.weights = it->second;
    }
    if (o.clustered) {
        auto it = table.categorical.find("hh_id");
        if (it == table.categorical.end())
            throw std::invalid_argument("clustered SEs need an hh_id column");
        opts.cluster = it->second;
    }
    return opts;
}

ModelSpec base_spec(const std::string& name, const std::string& dependent,
                    const FamilyOptions& o) {
    ModelSpec s;
    s.name = name;
    s.dependent = dependent;
    s.fixed_effects = {"state", "origin_occ"};
    if (!o.reference_social_group.empty())
        s.reference_levels["social_group"] = o.reference_social_group;
    return s;
}

}  // namespace

std::vector<RegressionResult> model_family_a(const DataTable& table, const FamilyOptions& o) {
    OlsOptions opts = family_options(table, o);
    std::vector<ModelSpec> specs;

    ModelSpec m1 = base_spec("(1)", "dij", o);
    m1.terms = {Term::num("edu_years", "Education")};
    specs.push_back(m1);

    ModelSpec m2 = m1;
    m2.name = "(2)";
    m2.terms.push_back(Term::cat("social_group"));
    specs.push_back(m2);

    ModelSpec m3 = m2;
    m3.name = "(3)";
    m3.terms.push_back(Term::num("origin_edu", "Oe"));
    specs.push_back(m3);

    ModelSpec m4 = m3;
    m4.name = "(4)";
    m4.terms.push_back(Term::num("assets", "Assets"));
    specs.push_back(m4);

    ModelSpec m5 = m4;
    m5.name = "(5)";
    m5.terms.push_back(Term::num("urban", "Urban"));
    m5.terms.push_back(Term::num("female", "Female"));
    m5.terms.push_back(Term::num("age", "Age"));
    specs.push_back(m5);

    std::vector<RegressionResult> out;
    for (const auto& s : specs) out.push_back(fit(table, s, opts));
    return out;
}

std::vector<RegressionResult> model_family_b(const DataTable& table, const FamilyOptions& o) {
    OlsOptions opts = family_options(table, o);
    std::vector<ModelSpec> specs;

    ModelSpec m1 = base_spec("(1)", "EDij", o);
    m1.terms = {Term::num("dij", "dij"),       Term::cat("social_group"),
                Term::num("assets", "Assets"), Term::num("urban", "Urban"),
                Term::num("female", "Female"), Term::num("age", "Age"),
                Term::num("origin_edu", "Oe")};
    specs.push_back(m1);

    ModelSpec m2 = m1;
    m2.name = "(2)";
    m2.terms.insert(m2.terms.begin() + 1, Term::num("edu_years", "Education (Eij)"));
    specs.push_back(m2);

    ModelSpec m3 = m2;
    m3.name = "(3)";
    m3.terms.push_back(Term::inter("dij", "edu_years", "dij*Eij"));
    specs.push_back(m3);

    std::vector<RegressionResult> out;
    for (const auto& s : specs) out.push_back(fit(table, s, opts));
    return out;
}

namespace {

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string cell(const TermEstimate& e) {
    return fixed3(e.coef) + e.stars + " (" + fixed3(e.se) + ")";
}

}  // namespace

std::string regression_table(const std::vector<RegressionResult>& results,
                             const std::string& dependent_label) {
    if (results.empty()) throw std::invalid_argument("no results to tabulate");

    // union of non-FE, non-intercept terms in first-appearance order
    std::vector<std::string> terms;
    for (const auto& r : results)
        for (const auto& e : r.estimates) {
            if (e.is_fixed_effect || e.label == "(Intercept)") continue;
            if (std::find(terms.begin(), terms.end(), e.label) == terms.end())
                terms.push_back(e.label);
        }

    const std::size_t k = results.size();
    std::vector<std::vector<std::string>> grid;  // rows x (1 + k)
    auto find_est = [](const RegressionResult& r, const std::string& label)
        -> const TermEstimate* {
        for (const auto& e : r.estimates)
            if (e.label == label && !e.is_fixed_effect) return &e;
        return nullptr;
    };
    for (const auto& term : terms) {
        std::vector<std::string> row{term};
        for (const auto& r : results) {
            const TermEstimate* e = find_est(r, term);
            row.push_back(e ? cell(*e) : "");
        }
        grid.push_back(std::move(row));
    }

    std::vector<std::string> obs_row{"Observations"}, r2_row{"R2"}, adj_row{"Adjusted R2"},
        rse_row{"Residual Std. Error"};
    for (const auto& r : results) {
        obs_row.push_back(std::to_string(r.n));
        r2_row.push_back(fixed3(r.r2));
        adj_row.push_back(fixed3(r.adj_r2));
        rse_row.push_back(fixed3(r.residual_se) + " (df = " + std::to_string(r.residual_df) + ")");
    }

    std::vector<std::size_t> width(1 + k, 0);
    auto widen = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    };
    std::vector<std::string> header{""};
    for (const auto& r : results) header.push_back(r.name);
    widen(header);
    for (const auto& row : grid) widen(row);
    widen(obs_row);
    widen(r2_row);
    widen(adj_row);
    widen(rse_row);

    std::size_t total = width[0];
    for (std::size_t i = 1; i <= k; ++i) total += 2 + width[i];

    auto emit = [&](std::ostringstream& out, const std::vector<std::string>& row) {
        out << row[0] << std::string(width[0] - row[0].size(), ' ');
        for (std::size_t i = 1; i < row.size(); ++i) {
            std::size_t pad = width[i] - row[i].size();
            out << "  " << std::string(pad / 2, ' ') << row[i]
                << std::string(pad - pad / 2, ' ');
        }
        out << "\n";
    };

    std::ostringstream out;
    out << std::string(total, '=') << "\n";
    out << std::string(width[0], ' ') << "  Dependent variable:\n";
    out << std::string(width[0], ' ') << "  " << dependent_label << "\n";
    out << std::string(total, '-') << "\n";
    emit(out, header);
    out << std::string(total, '-') << "\n";
    for (const auto& row : grid) emit(out, row);
    out << std::string(total, '-') << "\n";
    emit(out, obs_row);
    emit(out, r2_row);
    emit(out, adj_row);
    emit(out, rse_row);
    out << std::string(total, '=') << "\n";
    out << "Note: *p<0.1; **p<0.05; ***p<0.01\n";
    if (!results.front().fixed_effects.empty()) {
        out << "      State, and O_t (origin occupation) fixed effects are controlled for\n";
    }
    for (const auto& r : results)
        for (const auto& d : r.dropped)
            out << "      dropped collinear column in " << r.name << ": " << d << "\n";
    return out.str();
}

void write_regression_csv(const std::string& path,
                          const std::vector<RegressionResult>& results) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : results) {
        for (const auto& e : r.estimates)
            rows.push_back({r.name, e.label, csv::format_double(e.coef),
                            csv::format_double(e.se), csv::format_double(e.t),
                            csv::format_double(e.p), e.stars,
                            e.is_fixed_effect ? "1" : "0"});
        rows.push_back({r.name, "__observations__", std::to_string(r.n), "", "", "", "", ""});
        rows.push_back({r.name, "__r2__", csv::format_double(r.r2), "", "", "", "", ""});
        rows.push_back(
            {r.name, "__adj_r2__", csv::format_double(r.adj_r2), "", "", "", "", ""});
        rows.push_back({r.name, "__residual_se__", csv::format_double(r.residual_se),
                        std::to_string(r.residual_df), "", "", "", ""});
    }
    csv::write_file(path, {"model", "term", "coef", "se", "t", "p", "stars", "fixed_effect"},
                    rows);
}

}  // namespace stratmob
