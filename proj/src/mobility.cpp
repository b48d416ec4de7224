#include "stratmob/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stratmob/csv.hpp"

namespace stratmob {

std::string to_string(OriginRule rule) {
    return rule == OriginRule::edu_then_age ? "edu-then-age" : "age-then-edu";
}

OriginRule origin_rule_from_string(const std::string& name) {
    if (name == "edu-then-age") return OriginRule::edu_then_age;
    if (name == "age-then-edu") return OriginRule::age_then_edu;
    throw std::invalid_argument("unknown origin rule: " + name);
}

std::string to_string(EconomicDistanceMode mode) {
    return mode == EconomicDistanceMode::signed_mode ? "signed" : "absolute";
}

EconomicDistanceMode ed_mode_from_string(const std::string& name) {
    if (name == "signed") return EconomicDistanceMode::signed_mode;
    if (name == "absolute") return EconomicDistanceMode::absolute;
    throw std::invalid_argument("unknown economic distance mode: " + name);
}

std::string ExclusionReport::to_text() const {
    std::ostringstream out;
    out << "included records:            " << included << "\n"
        << "excluded, not working:       " << not_working << "\n"
        << "excluded, no occupation:     " << missing_occupation << "\n"
        << "excluded, rare occupation:   " << occupation_filtered << "\n"
        << "excluded, disconnected:      " << disconnected << "\n"
        << "excluded, origin member:     " << origin_member << "\n"
        << "excluded, no origin in hh:   " << no_origin_household << "\n";
    return out.str();
}

std::optional<OriginAssignment> identify_traditional(const Household& h, OriginRule rule) {
    const IndividualRecord* best = nullptr;
    for (const auto& m : h.members) {
        if (!m.is_working || m.occupation.empty()) continue;
        if (!best) {
            best = &m;
            continue;
        }
        // lexicographic key per rule; person_id as final tie-break
        auto key = [&](const IndividualRecord& r) {
            return rule == OriginRule::edu_then_age
                       ? std::make_tuple(r.education_years, -r.age, std::cref(r.person_id))
                       : std::make_tuple(-r.age, r.education_years, std::cref(r.person_id));
        };
        if (key(m) < key(*best)) best = &m;
    }
    if (!best) return std::nullopt;
    return OriginAssignment{h.household_id, best->occupation, best->person_id,
                            best->education_years};
}

double social_distance(const std::string& own_occ, const std::string& origin_occ,
                       const DistanceMatrix& D, double dij_scale) {
    const int i = D.index_of(own_occ);
    const int j = D.index_of(origin_occ);
    if (i < 0) throw std::invalid_argument("occupation not in network: " + own_occ);
    if (j < 0) throw std::invalid_argument("occupation not in network: " + origin_occ);
    return D.d(i, j) * dij_scale;
}

std::map<std::string, double> occupation_mpce(const std::vector<IndividualRecord>& records) {
    std::map<std::string, double> mass;
    std::map<std::string, double> weight;
    for (const auto& r : records) {
        if (!r.is_working || r.occupation.empty()) continue;
        mass[r.occupation] += r.hh_weight * r.mpce;
        weight[r.occupation] += r.hh_weight;
    }
    std::map<std::string, double> out;
    for (const auto& [code, w] : weight) {
        if (w <= 0) throw std::runtime_error("occupation has no MPCE data: " + code);
        out[code] = mass[code] / w;
    }
    return out;
}

double economic_distance(const std::string& own_occ, const std::string& origin_occ,
                         const std::map<std::string, double>& mpce_map,
                         EconomicDistanceMode mode) {
    auto own = mpce_map.find(own_occ);
    auto origin = mpce_map.find(origin_occ);
    if (own == mpce_map.end())
        throw std::invalid_argument("occupation missing from MPCE map: " + own_occ);
    if (origin == mpce_map.end())
        throw std::invalid_argument("occupation missing from MPCE map: " + origin_occ);
    const double diff = own->second - origin->second;
    return mode == EconomicDistanceMode::signed_mode ? diff : std::abs(diff);
}

std::vector<MobilityRecord> build_mobility_table(const std::vector<Household>& households,
                                                 const DistanceMatrix& D,
                                                 const std::map<std::string, double>& mpce_map,
                                                 ExclusionReport& report,
                                                 const MobilityOptions& options) {
    std::vector<MobilityRecord> out;
    for (const auto& h : households) {
        auto origin = identify_traditional(h, options.origin_rule);
        if (!origin || D.index_of(origin->origin_occupation) < 0 ||
            mpce_map.count(origin->origin_occupation) == 0) {
            // origin occupation itself unusable: whole household sits out
            for (const auto& m : h.members) {
                if (!m.is_working)
                    ++report.not_working;
                else
                    ++report.no_origin_household;
            }
            continue;
        }
        for (const auto& m : h.members) {
            if (!m.is_working) {
                ++report.not_working;
                continue;
            }
            if (m.occupation.empty()) {
                ++report.missing_occupation;
                continue;
            }
            if (m.person_id == origin->origin_person && !options.include_origin) {
                ++report.origin_member;
                continue;
            }
            const int own_ix = D.index_of(m.occupation);
            if (own_ix < 0 || mpce_map.count(m.occupation) == 0) {
                ++report.occupation_filtered;
                continue;
            }
            const double d =
                social_distance(m.occupation, origin->origin_occupation, D, options.dij_scale);
            if (std::isinf(d)) {
                ++report.disconnected;
                continue;
            }
            MobilityRecord rec;
            rec.person_id = m.person_id;
            rec.household_id = h.household_id;
            rec.d_ij = d;
            rec.ed_ij = economic_distance(m.occupation, origin->origin_occupation, mpce_map,
                                          options.ed_mode);
            rec.education_years = m.education_years;
            rec.origin_education = origin->origin_education;
            rec.origin_occupation = origin->origin_occupation;
            rec.occupation = m.occupation;
            rec.female = m.is_female;
            rec.urban = m.urban;
            rec.age = m.age;
            rec.assets = m.assets;
            rec.hh_weight = m.hh_weight;
            rec.social_group = m.social_group;
            rec.state = m.state;
            ++report.included;
            out.push_back(std::move(rec));
        }
    }
    std::sort(out.begin(), out.end(), [](const MobilityRecord& a, const MobilityRecord& b) {
        return std::tie(a.household_id, a.person_id) < std::tie(b.household_id, b.person_id);
    });
    return out;
}

DataTable to_data_table(const std::vector<MobilityRecord>& records) {
    DataTable t;
    t.n = records.size();
    auto& dij = t.numeric["dij"];
    auto& ed = t.numeric["EDij"];
    auto& edu = t.numeric["edu_years"];
    auto& oe = t.numeric["origin_edu"];
    auto& female = t.numeric["female"];
    auto& urban = t.numeric["urban"];
    auto& age = t.numeric["age"];
    auto& assets = t.numeric["assets"];
    auto& weight = t.numeric["hh_weight"];
    auto& group = t.categorical["social_group"];
    auto& state = t.categorical["state"];
    auto& origin = t.categorical["origin_occ"];
    auto& hh = t.categorical["hh_id"];
    for (const auto& r : records) {
        dij.push_back(r.d_ij);
        ed.push_back(r.ed_ij);
        edu.push_back(r.education_years);
        oe.push_back(r.origin_education);
        female.push_back(r.female ? 1.0 : 0.0);
        urban.push_back(r.urban ? 1.0 : 0.0);
        age.push_back(r.age);
        assets.push_back(r.assets);
        weight.push_back(r.hh_weight);
        group.push_back(r.social_group);
        state.push_back(r.state);
        origin.push_back(r.origin_occupation);
        hh.push_back(r.household_id);
    }
    return t;
}

void write_mobility_csv(const std::string& path, const std::vector<MobilityRecord>& records) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : records)
        rows.push_back({r.household_id, r.person_id, csv::format_exact(r.d_ij),
                        csv::format_exact(r.ed_ij), std::to_string(r.education_years),
                        std::to_string(r.origin_education), r.origin_occupation, r.occupation,
                        r.female ? "1" : "0", r.urban ? "1" : "0", std::to_string(r.age),
                        csv::format_exact(r.assets), csv::format_exact(r.hh_weight),
                        r.social_group, r.state});
    csv::write_file(path,
                    {"hh_id", "person_id", "dij", "EDij", "edu_years", "origin_edu", "origin_occ",
                     "occ2", "female", "urban", "age", "assets", "hh_weight", "social_group",
                     "state"},
                    rows);
}

std::vector<MobilityRecord> read_mobility_csv(const std::string& path) {
    csv::Table t = csv::read_file(path);
    const std::vector<std::string> expected = {
        "hh_id",  "person_id", "dij", "EDij",   "edu_years", "origin_edu", "origin_occ", "occ2",
        "female", "urban",     "age", "assets", "hh_weight", "social_group", "state"};
    if (t.header != expected)
        throw std::runtime_error("unexpected mobility header in " + path);
    std::vector<MobilityRecord> records;
    records.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        MobilityRecord r;
        r.household_id = row[0];
        r.person_id = row[1];
        r.d_ij = std::stod(row[2]);
        r.ed_ij = std::stod(row[3]);
        r.education_years = std::stoi(row[4]);
        r.origin_education = std::stoi(row[5]);
        r.origin_occupation = row[6];
        r.occupation = row[7];
        r.female = row[8] == "1";
        r.urban = row[9] == "1";
        r.age = std::stoi(row[10]);
        r.assets = std::stod(row[11]);
        r.hh_weight = std::stod(row[12]);
        r.social_group = row[13];
        r.state = row[14];
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace stratmob
