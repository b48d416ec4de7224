#pragma once

#include <set>
#include <string>
#include <vector>

#include "stratmob/ingest.hpp"
#include "stratmob/project.hpp"

namespace fixtures {

/// Canonical-schema survey CSV for the four-household worked example:
/// weights 100/200/300/400, occupation sets {10,11,12}, {10,11,13,14},
/// {14,15}, {10..15}. One working member per occupation held.
inline std::string appendix_survey_csv() {
    std::string out =
        "hh_id,person_id,hh_weight,state,urban,social_group,sex,age,edu_years,working,occ2,"
        "assets,mpce\n";
    auto add = [&out](const std::string& hh, int person, const std::string& weight,
                      const std::string& occ) {
        out += hh + "," + hh + "P" + std::to_string(person) + "," + weight +
               ",S1,0,FC,m,40,10,1," + occ + ",5,1000\n";
    };
    int p = 0;
    for (const std::string& occ : {"10", "11", "12"}) add("H1", ++p, "100", occ);
    p = 0;
    for (const std::string& occ : {"10", "11", "13", "14"}) add("H2", ++p, "200", occ);
    p = 0;
    for (const std::string& occ : {"14", "15"}) add("H3", ++p, "300", occ);
    p = 0;
    for (const std::string& occ : {"10", "11", "12", "13", "14", "15"}) add("H4", ++p, "400", occ);
    return out;
}

inline std::vector<stratmob::Household> appendix_households() {
    stratmob::LoadReport report;
    auto records = stratmob::load_survey_text(appendix_survey_csv(), {}, report, true);
    return stratmob::group_households(records);
}

inline stratmob::IncidenceMatrix appendix_incidence() {
    auto households = appendix_households();
    std::set<std::string> codes{"10", "11", "12", "13", "14", "15"};
    return stratmob::build_incidence(households, codes);
}

}  // namespace fixtures
