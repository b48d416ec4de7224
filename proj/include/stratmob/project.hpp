#pragma once

#include <Eigen/Dense>
#include <set>
#include <string>
#include <vector>

#include "stratmob/ingest.hpp"

namespace stratmob {

/// Household-by-occupation affiliation, stored sparse by household row.
struct IncidenceMatrix {
    std::vector<std::string> households;          // row ids
    std::vector<std::string> occupations;         // column codes, sorted
    std::vector<std::vector<int>> rows;           // per household: sorted occupation indices
    std::vector<double> weights;                  // W_k, positive

    double total_weight() const;
    Eigen::MatrixXd dense() const;
};

enum class TotalWeightMode { weighted, count };

std::string to_string(TotalWeightMode mode);
TotalWeightMode h_mode_from_string(const std::string& name);

/// Occupation-by-occupation co-membership mass U and its chi-square
/// normalization V.
struct StrengthMatrix {
    std::vector<std::string> occupations;
    Eigen::MatrixXd U;
    Eigen::MatrixXd V;
    double total_weight = 0.0;
};

/// A_ki = 1 iff household k has a working member in surviving occupation i.
/// Households whose occupation_set is empty after filtering are dropped.
IncidenceMatrix build_incidence(const std::vector<Household>& households,
                                const std::set<std::string>& surviving_codes);

/// One-mode projection: U_ij = sum_k A_ki * A_kj * W_k.
Eigen::MatrixXd project_unimodal(const IncidenceMatrix& m);

/// V_ij = (U_ij - h_i*h_j/h) / (h_i*h_j/h) with h_i = U_ii.
/// Throws when a diagonal entry is zero, naming the occupation.
Eigen::MatrixXd normalize_chi_square(const Eigen::MatrixXd& U,
                                     const std::vector<std::string>& occupations,
                                     double total_weight);

/// Full projection for an incidence matrix.
StrengthMatrix project(const IncidenceMatrix& m,
                       TotalWeightMode mode = TotalWeightMode::weighted);

/// Long-format export: occ_i, occ_j, U_ij, V_ij for i < j.
void write_edges_csv(const std::string& path, const StrengthMatrix& s);
/// Square-matrix export of V (header row/column of codes).
void write_matrix_csv(const std::string& path, const StrengthMatrix& s);
/// Reads an edges CSV back into a StrengthMatrix (round-trip support).
StrengthMatrix read_edges_csv(const std::string& path);

}  // namespace stratmob
