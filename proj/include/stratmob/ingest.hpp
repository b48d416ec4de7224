#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace stratmob {

/// One working-age person from the survey extract.
struct IndividualRecord {
    std::string household_id;
    std::string person_id;
    double hh_weight = 0.0;
    std::string state;
    bool urban = false;
    std::string social_group;
    bool is_female = false;
    int age = 0;
    int education_years = 0;
    bool is_working = false;
    std::string occupation;  // 2-digit NCO code, empty when absent
    double assets = 0.0;
    double mpce = 0.0;
};

/// All members of one household plus the set of occupations its working
/// members hold.
struct Household {
    std::string household_id;
    double weight = 0.0;
    std::vector<IndividualRecord> members;
    std::set<std::string> occupation_set;
};

/// Survey column names; defaults are the canonical schema.
struct ColumnMap {
    std::string hh_id = "hh_id";
    std::string person_id = "person_id";
    std::string hh_weight = "hh_weight";
    std::string state = "state";
    std::string urban = "urban";
    std::string social_group = "social_group";
    std::string sex = "sex";
    std::string age = "age";
    std::string edu_years = "edu_years";
    std::string working = "working";
    std::string occ2 = "occ2";
    std::string assets = "assets";
    std::string mpce = "mpce";
};

struct LoadReport {
    std::size_t total_rows = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::vector<std::string> diagnostics;  // one line per rejected row

    std::string to_text() const;
};

/// Parses and validates the survey CSV. Invalid rows are rejected with a
/// row-numbered diagnostic; under strict mode the first bad row throws.
std::vector<IndividualRecord> load_survey(const std::string& path, const ColumnMap& schema,
                                          LoadReport& report, bool strict = false);

std::vector<IndividualRecord> load_survey_text(const std::string& csv_text, const ColumnMap& schema,
                                               LoadReport& report, bool strict = false);

/// Groups records by household_id (deterministic: sorted by id). Throws when
/// household-level fields conflict within one id.
std::vector<Household> group_households(const std::vector<IndividualRecord>& records);

/// Drops occupation codes found in fewer than min_households distinct
/// households (unweighted count). Members are retained; only occupation_set
/// entries are pruned.
std::pair<std::vector<Household>, std::set<std::string>> filter_rare_occupations(
    const std::vector<Household>& households, int min_households = 10);

/// Canonical CSV export of records; load_survey on this output is a fixed
/// point.
void write_canonical_csv(const std::string& path, const std::vector<IndividualRecord>& records);
std::vector<std::string> canonical_header();
std::vector<std::string> canonical_row(const IndividualRecord& r);

}  // namespace stratmob
