#include "stratmob/project.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "stratmob/csv.hpp"

namespace stratmob {

std::string to_string(TotalWeightMode mode) {
    return mode == TotalWeightMode::weighted ? "weighted" : "count";
}

TotalWeightMode h_mode_from_string(const std::string& name) {
    if (name == "weighted") return TotalWeightMode::weighted;
    if (name == "count") return TotalWeightMode::count;
    throw std::invalid_argument("unknown h-mode: " + name);
}

double IncidenceMatrix::total_weight() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

Eigen::MatrixXd IncidenceMatrix::dense() const {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                              static_cast<Eigen::Index>(occupations.size()));
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (int i : rows[k]) A(static_cast<Eigen::Index>(k), i) = 1.0;
    return A;
}

IncidenceMatrix build_incidence(const std::vector<Household>& households,
                                const std::set<std::string>& surviving_codes) {
    if (surviving_codes.empty()) throw std::invalid_argument("no surviving occupation codes");
    IncidenceMatrix m;
    m.occupations.assign(surviving_codes.begin(), surviving_codes.end());
    std::map<std::string, int> col;
    for (std::size_t i = 0; i < m.occupations.size(); ++i)
        col[m.occupations[i]] = static_cast<int>(i);

    for (const auto& h : households) {
        std::vector<int> row;
        for (const auto& code : h.occupation_set) {
            auto it = col.find(code);
            if (it != col.end()) row.push_back(it->second);
        }
        if (row.empty()) continue;  // nothing survives the filter for this household
        std::sort(row.begin(), row.end());
        m.households.push_back(h.household_id);
        m.rows.push_back(std::move(row));
        m.weights.push_back(h.weight);
    }
    return m;
}

Eigen::MatrixXd project_unimodal(const IncidenceMatrix& m) {
    const Eigen::Index c = static_cast<Eigen::Index>(m.occupations.size());
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(c, c);
    for (std::size_t k = 0; k < m.rows.size(); ++k) {
        const double w = m.weights[k];
        const auto& row = m.rows[k];
        for (std::size_t a = 0; a < row.size(); ++a)
            for (std::size_t b = a; b < row.size(); ++b) {
                U(row[a], row[b]) += w;
                if (a != b) U(row[b], row[a]) += w;
            }
    }
    return U;
}

Eigen::MatrixXd normalize_chi_square(const Eigen::MatrixXd& U,
                                     const std::vector<std::string>& occupations,
                                     double total_weight) {
    if (total_weight <= 0) throw std::invalid_argument("total_weight must be positive");
    const Eigen::Index c = U.rows();
    for (Eigen::Index i = 0; i < c; ++i)
        if (U(i, i) <= 0)
            throw std::runtime_error("zero diagonal co-membership for occupation " +
                                     (static_cast<std::size_t>(i) < occupations.size()
                                          ? occupations[static_cast<std::size_t>(i)]
                                          : std::to_string(i)));
    Eigen::MatrixXd V(c, c);
    for (Eigen::Index i = 0; i < c; ++i)
        for (Eigen::Index j = 0; j < c; ++j) {
            const double expected = U(i, i) * U(j, j) / total_weight;
            V(i, j) = (U(i, j) - expected) / expected;
        }
    return V;
}

StrengthMatrix project(const IncidenceMatrix& m, TotalWeightMode mode) {
    StrengthMatrix s;
    s.occupations = m.occupations;
    s.U = project_unimodal(m);
    s.total_weight = mode == TotalWeightMode::weighted ? m.total_weight()
                                                       : static_cast<double>(m.rows.size());
    s.V = normalize_chi_square(s.U, s.occupations, s.total_weight);
    return s;
}

void write_edges_csv(const std::string& path, const StrengthMatrix& s) {
    std::vector<std::vector<std::string>> rows;
    const Eigen::Index c = s.U.rows();
    for (Eigen::Index i = 0; i < c; ++i)
        for (Eigen::Index j = i; j < c; ++j)
            rows.push_back({s.occupations[static_cast<std::size_t>(i)],
                            s.occupations[static_cast<std::size_t>(j)],
                            csv::format_double(s.U(i, j), 6), csv::format_double(s.V(i, j), 6)});
    csv::write_file(path, {"occ_i", "occ_j", "U_ij", "V_ij"}, rows);
}

void write_matrix_csv(const std::string& path, const StrengthMatrix& s) {
    std::vector<std::string> header{"occ2"};
    header.insert(header.end(), s.occupations.begin(), s.occupations.end());
    std::vector<std::vector<std::string>> rows;
    const Eigen::Index c = s.V.rows();
    for (Eigen::Index i = 0; i < c; ++i) {
        std::vector<std::string> row{s.occupations[static_cast<std::size_t>(i)]};
        for (Eigen::Index j = 0; j < c; ++j) row.push_back(csv::format_exact(s.V(i, j)));
        rows.push_back(std::move(row));
    }
    csv::write_file(path, header, rows);
}

StrengthMatrix read_edges_csv(const std::string& path) {
    csv::Table t = csv::read_file(path);
    auto ci = t.column("occ_i"), cj = t.column("occ_j"), cu = t.column("U_ij"),
         cv = t.column("V_ij");
    if (!ci || !cj || !cu || !cv) throw std::runtime_error("malformed edges CSV: " + path);
    std::set<std::string> codes;
    for (const auto& r : t.rows) {
        codes.insert(r[*ci]);
        codes.insert(r[*cj]);
    }
    StrengthMatrix s;
    s.occupations.assign(codes.begin(), codes.end());
    std::map<std::string, Eigen::Index> ix;
    for (std::size_t i = 0; i < s.occupations.size(); ++i)
        ix[s.occupations[i]] = static_cast<Eigen::Index>(i);
    const Eigen::Index c = static_cast<Eigen::Index>(s.occupations.size());
    s.U = Eigen::MatrixXd::Zero(c, c);
    s.V = Eigen::MatrixXd::Constant(c, c, -1.0);
    for (const auto& r : t.rows) {
        Eigen::Index i = ix[r[*ci]], j = ix[r[*cj]];
        double u = std::stod(r[*cu]), v = std::stod(r[*cv]);
        s.U(i, j) = s.U(j, i) = u;
        s.V(i, j) = s.V(j, i) = v;
    }
    return s;
}

}  // namespace stratmob
