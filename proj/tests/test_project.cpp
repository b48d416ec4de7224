#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "stratmob/project.hpp"
#include "stratmob/rng.hpp"

using namespace stratmob;

namespace {

/// Independent brute-force oracle: U_ij = sum_k A_ki A_kj W_k as three loops
/// over the dense matrix.
Eigen::MatrixXd oracle_projection(const Eigen::MatrixXd& A, const std::vector<double>& w) {
    const Eigen::Index c = A.cols();
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(c, c);
    for (Eigen::Index i = 0; i < c; ++i)
        for (Eigen::Index j = 0; j < c; ++j)
            for (Eigen::Index k = 0; k < A.rows(); ++k)
                U(i, j) += A(k, i) * A(k, j) * w[static_cast<std::size_t>(k)];
    return U;
}

IncidenceMatrix random_incidence(Rng& rng, int max_h = 20, int max_c = 10) {
    const int h = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_h)));
    const int c = 2 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_c - 1)));
    IncidenceMatrix m;
    for (int i = 0; i < c; ++i) m.occupations.push_back("C" + std::to_string(10 + i));
    for (int k = 0; k < h; ++k) {
        std::vector<int> row;
        for (int i = 0; i < c; ++i)
            if (rng.uniform() < 0.5) row.push_back(i);
        if (row.empty()) row.push_back(static_cast<int>(rng.uniform_int(c)));
        m.households.push_back("H" + std::to_string(k));
        m.rows.push_back(row);
        m.weights.push_back(rng.uniform(0.1, 10.0));
    }
    // make every column non-empty so normalization is defined
    for (int i = 0; i < c; ++i) {
        bool seen = false;
        for (const auto& row : m.rows)
            for (int v : row) seen = seen || v == i;
        if (!seen) {
            m.rows[0].push_back(i);
            std::sort(m.rows[0].begin(), m.rows[0].end());
            m.rows[0].erase(std::unique(m.rows[0].begin(), m.rows[0].end()), m.rows[0].end());
        }
    }
    return m;
}

}  // namespace

TEST_CASE("worked-example incidence matrix matches the hand matrix") {
    auto m = fixtures::appendix_incidence();
    Eigen::MatrixXd expected(4, 6);
    expected << 1, 1, 1, 0, 0, 0,  //
        1, 1, 0, 1, 1, 0,          //
        0, 0, 0, 0, 1, 1,          //
        1, 1, 1, 1, 1, 1;
    CHECK(m.dense() == expected);
    CHECK(m.weights == std::vector<double>{100, 200, 300, 400});
    CHECK(m.total_weight() == 1000);
}

TEST_CASE("two members in the same occupation still yield a single 1") {
    Household h;
    h.household_id = "H1";
    h.weight = 1;
    h.occupation_set = {"10"};  // the set already deduplicates
    auto m = build_incidence({h}, {"10"});
    CHECK(m.dense() == Eigen::MatrixXd::Ones(1, 1));
}

TEST_CASE("worked-example projection: U_12 = 700 and U_36 = 400") {
    auto s = project(fixtures::appendix_incidence());
    CHECK(s.U(0, 1) == 700);  // households 1, 2, 4
    CHECK(s.U(2, 5) == 400);  // household 4 only
    CHECK(s.U(0, 0) == 700);
    CHECK(s.total_weight == 1000);
}

TEST_CASE("worked-example normalization: V_12 = 3/7, V_36 = 1/7, V_56 = 1/9") {
    auto s = project(fixtures::appendix_incidence());
    CHECK(s.V(0, 1) == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
    CHECK(s.V(2, 5) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(s.V(4, 5) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("exact independence gives V = 0") {
    // U_ij = h_i h_j / h exactly
    Eigen::MatrixXd U(2, 2);
    U << 4, 2, 2, 4;  // h = 8: expected 4*4/8 = 2
    auto V = normalize_chi_square(U, {"a", "b"}, 8.0);
    CHECK(V(0, 1) == 0.0);
}

TEST_CASE("zero diagonal raises an error naming the occupation") {
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(2, 2);
    U(0, 0) = 1;
    CHECK_THROWS_WITH_AS(normalize_chi_square(U, {"aa", "bb"}, 1.0), doctest::Contains("bb"),
                         std::runtime_error);
}

TEST_CASE("projection matches the triple-loop oracle on random matrices") {
    Rng rng(12345);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = random_incidence(rng);
        auto U = project_unimodal(m);
        auto expected = oracle_projection(m.dense(), m.weights);
        CHECK((U - expected).cwiseAbs().maxCoeff() <=
              1e-12 * std::max(1.0, expected.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("scaling all weights leaves V unchanged") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = random_incidence(rng);
        auto s = project(m);
        auto scaled = m;
        for (auto& w : scaled.weights) w *= 1000.0;
        auto s2 = project(scaled);
        CHECK((s2.U - 1000.0 * s.U).cwiseAbs().maxCoeff() <=
              1e-9 * s2.U.cwiseAbs().maxCoeff());
        CHECK((s2.V - s.V).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("permuting occupations permutes U and V consistently") {
    auto m = fixtures::appendix_incidence();
    auto s = project(m);
    // reverse the column order
    IncidenceMatrix rev = m;
    const int c = static_cast<int>(m.occupations.size());
    std::reverse(rev.occupations.begin(), rev.occupations.end());
    for (auto& row : rev.rows) {
        for (auto& v : row) v = c - 1 - v;
        std::sort(row.begin(), row.end());
    }
    auto s2 = project(rev);
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j) {
            CHECK(s2.U(i, j) == s.U(c - 1 - i, c - 1 - j));
            CHECK(s2.V(i, j) == s.V(c - 1 - i, c - 1 - j));
        }
}

TEST_CASE("V is bounded below by -1") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = project(random_incidence(rng));
        CHECK(s.V.minCoeff() >= -1.0);
    }
}

TEST_CASE("count mode uses the household count as the normalization total") {
    auto m = fixtures::appendix_incidence();
    auto s = project(m, TotalWeightMode::count);
    CHECK(s.total_weight == 4);
}

TEST_CASE("edges CSV round-trips U and V") {
    auto s = project(fixtures::appendix_incidence());
    std::string path = "edges_roundtrip.tmp.csv";
    write_edges_csv(path, s);
    auto s2 = read_edges_csv(path);
    CHECK(s2.occupations == s.occupations);
    CHECK((s2.U - s.U).cwiseAbs().maxCoeff() <= 1e-6 * s.U.cwiseAbs().maxCoeff());
    CHECK((s2.V - s.V).cwiseAbs().maxCoeff() <= 1e-6);
    std::remove(path.c_str());
}
