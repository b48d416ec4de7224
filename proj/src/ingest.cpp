#include "stratmob/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "stratmob/csv.hpp"
#include "stratmob/nco.hpp"

namespace stratmob {

namespace {

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stod(s, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == s.size() && std::isfinite(out);
}

bool parse_int(const std::string& s, int& out) {
    double d;
    if (!parse_double(s, d)) return false;
    if (d != std::floor(d)) return false;
    out = static_cast<int>(d);
    return true;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool parse_bool(const std::string& raw, bool& out) {
    std::string s = lower(raw);
    if (s == "1" || s == "true" || s == "yes" || s == "y") {
        out = true;
        return true;
    }
    if (s == "0" || s == "false" || s == "no" || s == "n") {
        out = false;
        return true;
    }
    return false;
}

// Numeric survey sex coding (1 = male, 2 = female) or textual values.
bool parse_female(const std::string& raw, bool& out) {
    std::string s = lower(raw);
    if (s == "f" || s == "female" || s == "2") {
        out = true;
        return true;
    }
    if (s == "m" || s == "male" || s == "1") {
        out = false;
        return true;
    }
    return false;
}

struct ColumnIndex {
    std::size_t hh_id, person_id, hh_weight, state, urban, social_group, sex, age, edu_years,
        working, occ2, assets, mpce;
};

ColumnIndex resolve(const csv::Table& t, const ColumnMap& schema) {
    auto need = [&](const std::string& name) {
        auto idx = t.column(name);
        if (!idx) throw std::runtime_error("missing mapped column: " + name);
        return *idx;
    };
    return ColumnIndex{need(schema.hh_id),  need(schema.person_id), need(schema.hh_weight),
                       need(schema.state),  need(schema.urban),     need(schema.social_group),
                       need(schema.sex),    need(schema.age),       need(schema.edu_years),
                       need(schema.working), need(schema.occ2),     need(schema.assets),
                       need(schema.mpce)};
}

}  // namespace

std::string LoadReport::to_text() const {
    std::ostringstream out;
    out << "rows read:     " << total_rows << "\n"
        << "rows accepted: " << accepted << "\n"
        << "rows rejected: " << rejected << "\n";
    for (const auto& d : diagnostics) out << "  " << d << "\n";
    return out.str();
}

static std::vector<IndividualRecord> load_table(const csv::Table& table, const ColumnMap& schema,
                                                LoadReport& report, bool strict) {
    ColumnIndex ix = resolve(table, schema);
    std::vector<IndividualRecord> out;
    out.reserve(table.rows.size());
    report.total_rows = table.rows.size();

    for (std::size_t row = 0; row < table.rows.size(); ++row) {
        const auto& cells = table.rows[row];
        // data rows are 1-based, header is row 0
        auto reject = [&](const std::string& why) {
            ++report.rejected;
            std::ostringstream msg;
            msg << "row " << row + 1 << ": " << why;
            if (strict) throw std::runtime_error(msg.str());
            report.diagnostics.push_back(msg.str());
        };
        std::size_t width = std::max({ix.hh_id, ix.person_id, ix.hh_weight, ix.state, ix.urban,
                                      ix.social_group, ix.sex, ix.age, ix.edu_years, ix.working,
                                      ix.occ2, ix.assets, ix.mpce}) +
                            1;
        if (cells.size() < width) {
            reject("too few cells");
            continue;
        }

        IndividualRecord r;
        r.household_id = cells[ix.hh_id];
        r.person_id = cells[ix.person_id];
        r.state = cells[ix.state];
        r.social_group = cells[ix.social_group];
        if (r.household_id.empty()) {
            reject("empty hh_id");
            continue;
        }
        if (r.person_id.empty()) {
            reject("empty person_id");
            continue;
        }
        if (!parse_double(cells[ix.hh_weight], r.hh_weight)) {
            reject("unparseable hh_weight '" + cells[ix.hh_weight] + "'");
            continue;
        }
        if (r.hh_weight <= 0) {
            reject("invariant violated: hh_weight > 0");
            continue;
        }
        if (!parse_bool(cells[ix.urban], r.urban)) {
            reject("unparseable urban '" + cells[ix.urban] + "'");
            continue;
        }
        if (!parse_female(cells[ix.sex], r.is_female)) {
            reject("unparseable sex '" + cells[ix.sex] + "'");
            continue;
        }
        if (!parse_int(cells[ix.age], r.age) || r.age < 0) {
            reject("unparseable age '" + cells[ix.age] + "'");
            continue;
        }
        if (r.age > 120) {
            reject("invariant violated: age <= 120");
            continue;
        }
        if (!parse_int(cells[ix.edu_years], r.education_years) || r.education_years < 0) {
            reject("unparseable edu_years '" + cells[ix.edu_years] + "'");
            continue;
        }
        if (r.education_years > 30) {
            reject("invariant violated: education_years <= 30");
            continue;
        }
        if (!parse_bool(cells[ix.working], r.is_working)) {
            reject("unparseable working '" + cells[ix.working] + "'");
            continue;
        }
        r.occupation = cells[ix.occ2];
        if (!r.occupation.empty() && !nco::is_valid_code(r.occupation)) {
            reject("unknown NCO-1968 code '" + r.occupation + "'");
            continue;
        }
        if (!parse_double(cells[ix.assets], r.assets)) {
            reject("unparseable assets '" + cells[ix.assets] + "'");
            continue;
        }
        if (!parse_double(cells[ix.mpce], r.mpce) || r.mpce < 0) {
            reject("unparseable or negative mpce '" + cells[ix.mpce] + "'");
            continue;
        }
        ++report.accepted;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<IndividualRecord> load_survey(const std::string& path, const ColumnMap& schema,
                                          LoadReport& report, bool strict) {
    return load_table(csv::read_file(path), schema, report, strict);
}

std::vector<IndividualRecord> load_survey_text(const std::string& csv_text,
                                               const ColumnMap& schema, LoadReport& report,
                                               bool strict) {
    return load_table(csv::read_string(csv_text), schema, report, strict);
}

std::vector<Household> group_households(const std::vector<IndividualRecord>& records) {
    std::map<std::string, Household> by_id;
    std::vector<std::string> conflicts;
    for (const auto& r : records) {
        auto [it, fresh] = by_id.try_emplace(r.household_id);
        Household& h = it->second;
        if (fresh) {
            h.household_id = r.household_id;
            h.weight = r.hh_weight;
        } else {
            const auto& first = h.members.front();
            bool consistent = first.hh_weight == r.hh_weight && first.state == r.state &&
                              first.urban == r.urban && first.social_group == r.social_group &&
                              first.assets == r.assets;
            if (!consistent &&
                (conflicts.empty() || conflicts.back() != r.household_id))
                conflicts.push_back(r.household_id);
        }
        if (r.is_working && !r.occupation.empty()) h.occupation_set.insert(r.occupation);
        h.members.push_back(r);
    }
    if (!conflicts.empty()) {
        std::string msg = "conflicting household-level fields in household(s):";
        for (const auto& id : conflicts) msg += " " + id;
        throw std::runtime_error(msg);
    }
    std::vector<Household> out;
    out.reserve(by_id.size());
    for (auto& [id, h] : by_id) out.push_back(std::move(h));
    return out;
}

std::pair<std::vector<Household>, std::set<std::string>> filter_rare_occupations(
    const std::vector<Household>& households, int min_households) {
    if (min_households < 1) throw std::invalid_argument("min_households must be >= 1");
    std::map<std::string, int> counts;
    for (const auto& h : households)
        for (const auto& code : h.occupation_set) ++counts[code];

    std::set<std::string> dropped;
    for (const auto& [code, n] : counts)
        if (n < min_households) dropped.insert(code);

    std::vector<Household> out = households;
    for (auto& h : out)
        for (const auto& code : dropped) h.occupation_set.erase(code);
    return {std::move(out), std::move(dropped)};
}

std::vector<std::string> canonical_header() {
    return {"hh_id", "person_id", "hh_weight", "state",   "urban",  "social_group", "sex",
            "age",   "edu_years", "working",   "occ2",    "assets", "mpce"};
}

std::vector<std::string> canonical_row(const IndividualRecord& r) {
    return {r.household_id,
            r.person_id,
            csv::format_exact(r.hh_weight),
            r.state,
            r.urban ? "1" : "0",
            r.social_group,
            r.is_female ? "female" : "male",
            std::to_string(r.age),
            std::to_string(r.education_years),
            r.is_working ? "1" : "0",
            r.occupation,
            csv::format_exact(r.assets),
            csv::format_exact(r.mpce)};
}

void write_canonical_csv(const std::string& path, const std::vector<IndividualRecord>& records) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back(canonical_row(r));
    csv::write_file(path, canonical_header(), rows);
}

}  // namespace stratmob
