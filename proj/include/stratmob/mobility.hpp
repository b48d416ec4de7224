#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratmob/ingest.hpp"
#include "stratmob/netgraph.hpp"
#include "stratmob/regress.hpp"

namespace stratmob {

enum class OriginRule { edu_then_age, age_then_edu };
enum class EconomicDistanceMode { signed_mode, absolute };

std::string to_string(OriginRule rule);
OriginRule origin_rule_from_string(const std::string& name);
std::string to_string(EconomicDistanceMode mode);
EconomicDistanceMode ed_mode_from_string(const std::string& name);

/// The household member whose occupation is treated as the traditional one.
struct OriginAssignment {
    std::string household_id;
    std::string origin_occupation;
    std::string origin_person;
    int origin_education = 0;
};

/// One row of the regression sample.
struct MobilityRecord {
    std::string person_id;
    std::string household_id;
    double d_ij = 0.0;
    double ed_ij = 0.0;
    int education_years = 0;
    int origin_education = 0;
    std::string origin_occupation;
    std::string occupation;
    bool female = false;
    bool urban = false;
    int age = 0;
    double assets = 0.0;
    double hh_weight = 0.0;
    std::string social_group;
    std::string state;
};

/// Exclusion bookkeeping: every excluded individual lands in exactly one
/// bucket.
struct ExclusionReport {
    std::size_t not_working = 0;
    std::size_t missing_occupation = 0;
    std::size_t occupation_filtered = 0;   // code dropped by the rarity filter
    std::size_t disconnected = 0;          // no finite path to the origin occupation
    std::size_t origin_member = 0;         // the origin member itself
    std::size_t no_origin_household = 0;   // members of households without an origin
    std::size_t included = 0;

    std::string to_text() const;
};

/// Selects the origin member: minimum education then maximum age under the
/// default rule (ties broken by minimum person_id). Returns nullopt when no
/// working member holds an occupation.
std::optional<OriginAssignment> identify_traditional(const Household& h,
                                                     OriginRule rule = OriginRule::edu_then_age);

/// Geodesic distance between two occupation codes, scaled by dij_scale.
/// Throws when a code is absent from the matrix.
double social_distance(const std::string& own_occ, const std::string& origin_occ,
                       const DistanceMatrix& D, double dij_scale = 1.0);

/// Weight-weighted mean MPCE per occupation over working, occupation-holding
/// records (equals the prediction of an OLS on occupation dummies). Throws
/// when some requested occupation has no MPCE data.
std::map<std::string, double> occupation_mpce(const std::vector<IndividualRecord>& records);

double economic_distance(const std::string& own_occ, const std::string& origin_occ,
                         const std::map<std::string, double>& mpce_map,
                         EconomicDistanceMode mode = EconomicDistanceMode::signed_mode);

struct MobilityOptions {
    OriginRule origin_rule = OriginRule::edu_then_age;
    EconomicDistanceMode ed_mode = EconomicDistanceMode::signed_mode;
    double dij_scale = 1.0;
    bool include_origin = false;
};

/// Assembles one record per working, occupation-holding, non-origin member of
/// every household with an identifiable origin. Output ordered by
/// (household_id, person_id).
std::vector<MobilityRecord> build_mobility_table(const std::vector<Household>& households,
                                                 const DistanceMatrix& D,
                                                 const std::map<std::string, double>& mpce_map,
                                                 ExclusionReport& report,
                                                 const MobilityOptions& options = {});

/// Column-oriented view for the regression engine.
DataTable to_data_table(const std::vector<MobilityRecord>& records);

void write_mobility_csv(const std::string& path, const std::vector<MobilityRecord>& records);
std::vector<MobilityRecord> read_mobility_csv(const std::string& path);

}  // namespace stratmob
