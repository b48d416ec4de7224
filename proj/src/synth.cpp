#include "stratmob/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "stratmob/csv.hpp"
#include "stratmob/mobility.hpp"
#include "stratmob/nco.hpp"
#include "stratmob/project.hpp"
#include "stratmob/regress.hpp"
#include "stratmob/rng.hpp"

namespace stratmob {

namespace {

constexpr const char* kGroups[] = {"FC", "OBC", "SC", "ST", "MUS", "OTH", "GEN"};

double round_to(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

struct MemberSlot {
    std::size_t record_index;   // into records
    int origin_index;           // occupation index of the household origin
    int own_index;              // occupation index of this member
    double distance = 0.0;      // realized geodesic, NaN/inf when unusable
};

double coefficient_of(const RegressionResult& r, const std::string& label) {
    for (const auto& e : r.estimates)
        if (e.label == label) return e.coef;
    throw std::runtime_error("coefficient not found in fit: " + label);
}

}  // namespace

SynthResult generate(const SynthConfig& config) {
    if (config.n_households < 0) throw std::invalid_argument("n_households must be >= 0");
    if (config.n_occupations < 2 ||
        config.n_occupations > static_cast<int>(nco::groups().size()))
        throw std::invalid_argument("n_occupations out of range");
    if (config.n_blocks < 1 || config.n_blocks > config.n_occupations)
        throw std::invalid_argument("n_blocks out of range");
    if (config.within_tie_prob < 0 || config.cross_tie_prob < 0 ||
        config.within_tie_prob + config.cross_tie_prob > 1.0 + 1e-12)
        throw std::invalid_argument("tie probabilities must be non-negative and sum to <= 1");
    if (config.within_tie_prob <= config.cross_tie_prob && config.cross_tie_prob > 0)
        throw std::invalid_argument("within_tie_prob must exceed cross_tie_prob");
    if (config.members_min < 2 || config.members_max < config.members_min)
        throw std::invalid_argument("invalid members_per_household range");
    if (config.planted_beta_education == 0.0)
        throw std::invalid_argument("planted_beta_education must be nonzero");
    if (config.noise_sd <= 0) throw std::invalid_argument("noise_sd must be positive");

    SynthResult out;
    out.planted_beta = config.planted_beta_education;
    out.planted_gamma = config.planted_gamma_interaction;

    const int c = config.n_occupations;
    const int nb = config.n_blocks;
    // contiguous blocks; the remainder goes to the last block
    const int per_block = c / nb;
    for (int i = 0; i < c; ++i) {
        out.occupations.push_back(nco::groups()[static_cast<std::size_t>(i)].code);
        out.block_of[out.occupations.back()] = std::min(i / per_block, nb - 1);
    }
    auto block_of_index = [&](int i) { return std::min(i / per_block, nb - 1); };
    auto block_lo = [&](int b) { return b * per_block; };
    auto block_hi = [&](int b) { return b == nb - 1 ? c - 1 : (b + 1) * per_block - 1; };

    if (config.n_households == 0) return out;

    Rng rng(config.seed);
    std::vector<MemberSlot> slots;

    for (int h = 0; h < config.n_households; ++h) {
        const std::string hh_id = "H" + std::to_string(h + 1);
        const double weight = static_cast<double>(rng.uniform_int(500, 1500));
        const std::string state = "S" + std::to_string(rng.uniform_int(1, 5));
        const bool urban = rng.bernoulli(0.3);
        const std::string group = kGroups[rng.uniform_int(std::uint64_t{7})];
        const double assets = round_to(rng.normal(5.0, 2.0), 3);

        const int origin_occ = static_cast<int>(rng.uniform_int(std::uint64_t(c)));
        const int origin_block = block_of_index(origin_occ);
        const int n_members =
            static_cast<int>(rng.uniform_int(config.members_min, config.members_max));

        IndividualRecord origin;
        origin.household_id = hh_id;
        origin.person_id = hh_id + "P1";
        origin.hh_weight = weight;
        origin.state = state;
        origin.urban = urban;
        origin.social_group = group;
        origin.is_female = rng.bernoulli(0.5);
        origin.age = static_cast<int>(rng.uniform_int(65, 90));
        origin.education_years = static_cast<int>(rng.uniform_int(0, 2));
        origin.is_working = true;
        origin.occupation = out.occupations[static_cast<std::size_t>(origin_occ)];
        origin.assets = assets;
        origin.mpce = 0.0;  // filled after calibration
        out.records.push_back(origin);

        for (int m = 1; m < n_members; ++m) {
            const double u = rng.uniform();
            int own;
            if (u < config.within_tie_prob) {
                own = static_cast<int>(rng.uniform_int(block_lo(origin_block),
                                                       block_hi(origin_block)));
            } else if (u < config.within_tie_prob + config.cross_tie_prob) {
                // nearby blocks preferred, movement biased up the line
                constexpr double rho = 0.45;
                double total = 0.0;
                for (int k = 1; k < nb; ++k) total += std::pow(rho, k);
                double pick = rng.uniform() * total;
                int k = 1;
                for (; k < nb - 1; ++k) {
                    pick -= std::pow(rho, k);
                    if (pick <= 0) break;
                }
                bool up = rng.bernoulli(0.8);
                int target = origin_block + (up ? k : -k);
                if (target >= nb) target = origin_block - k;
                if (target < 0) target = origin_block + k;
                target = std::clamp(target, 0, nb - 1);
                own = static_cast<int>(rng.uniform_int(block_lo(target), block_hi(target)));
            } else {
                own = origin_occ;  // family occupation carried on
            }

            IndividualRecord r;
            r.household_id = hh_id;
            r.person_id = hh_id + "P" + std::to_string(m + 1);
            r.hh_weight = weight;
            r.state = state;
            r.urban = urban;
            r.social_group = group;
            r.is_female = rng.bernoulli(0.5);
            r.age = static_cast<int>(rng.uniform_int(20, 60));
            r.education_years = 3;  // provisional; replaced by calibration
            r.is_working = true;
            r.occupation = out.occupations[static_cast<std::size_t>(own)];
            r.assets = assets;
            r.mpce = 0.0;
            MemberSlot slot;
            slot.record_index = out.records.size();
            slot.origin_index = origin_occ;
            slot.own_index = own;
            out.records.push_back(r);
            slots.push_back(slot);
        }
    }

    // realize the occupational network exactly the way the pipeline will
    auto households = group_households(out.records);
    auto [filtered, dropped] = filter_rare_occupations(households, 10);
    std::set<std::string> surviving;
    for (const auto& h : filtered)
        surviving.insert(h.occupation_set.begin(), h.occupation_set.end());
    if (surviving.empty()) throw std::runtime_error("degenerate config: no surviving occupations");
    IncidenceMatrix incidence = build_incidence(filtered, surviving);
    StrengthMatrix strength = project(incidence);
    OccupationGraph graph = to_graph(strength, LengthRule::reciprocal);
    DistanceMatrix D = geodesic_all_pairs(graph);

    std::vector<double> eps(slots.size());
    std::vector<int> fallback_edu(slots.size());
    std::vector<double> finite_d;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        auto& s = slots[i];
        const int a = D.index_of(out.occupations[static_cast<std::size_t>(s.own_index)]);
        const int b = D.index_of(out.occupations[static_cast<std::size_t>(s.origin_index)]);
        s.distance = (a >= 0 && b >= 0) ? D.d(a, b)
                                        : std::numeric_limits<double>::infinity();
        eps[i] = rng.normal(0.0, config.noise_sd);
        fallback_edu[i] = static_cast<int>(rng.uniform_int(3, 16));  // unusable pairs
        if (std::isfinite(s.distance)) finite_d.push_back(s.distance);
    }
    if (finite_d.empty()) throw std::runtime_error("degenerate config: no connected member pairs");
    std::sort(finite_d.begin(), finite_d.end());
    const double d_lo = finite_d.front();
    const double d_hi = finite_d[static_cast<std::size_t>(0.95 * (finite_d.size() - 1))];

    // education from realized distance: E = 3 + (d - d_lo - eps) / b_scale,
    // clamped to [3, 30]; b_scale calibrated so the fitted education
    // coefficient in the social-distance model equals the planted value
    auto assign_education = [&](double b_scale) {
        for (std::size_t i = 0; i < slots.size(); ++i) {
            const auto& s = slots[i];
            int e = fallback_edu[i];
            if (std::isfinite(s.distance))
                e = 3 + static_cast<int>(std::lround((s.distance - d_lo - eps[i]) / b_scale));
            out.records[s.record_index].education_years = std::clamp(e, 3, 30);
        }
    };

    auto run_family = [&](bool family_b) {
        auto hh = group_households(out.records);
        auto [f2, d2] = filter_rare_occupations(hh, 10);
        std::map<std::string, double> mpce_map = occupation_mpce(out.records);
        ExclusionReport rep;
        auto table = build_mobility_table(f2, D, mpce_map, rep, {});
        DataTable dt = to_data_table(table);
        if (family_b) return model_family_b(dt);
        return model_family_a(dt);
    };

    // provisional flat MPCE so the mobility table can be built during the
    // education calibration (model family A never reads MPCE)
    for (auto& r : out.records) r.mpce = 1000.0;

    // start small so education varies, then rescale toward the target slope;
    // education collapses to a constant (and drops out of the fit) once
    // b_scale dwarfs both the distance range and the noise spread, so cap the
    // step there: tight networks settle on the steepest achievable slope
    // instead of oscillating between a constant column and an overshoot
    const double b_cap = std::max(d_hi - d_lo + 4.0 * config.noise_sd, 1e-9);
    double b_scale = std::max((d_hi - d_lo) / 27.0, 1e-9);
    double beta_hat = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 12; ++iter) {
        assign_education(b_scale);
        try {
            beta_hat = coefficient_of(run_family(false).front(), "Education");
        } catch (const std::runtime_error&) {
            b_scale *= 0.25;  // education collapsed to a constant; spread it out
            continue;
        }
        if (!std::isfinite(beta_hat) || beta_hat <= 1e-9) {
            b_scale *= 0.25;
            continue;
        }
        const double ratio = config.planted_beta_education / beta_hat;
        if (std::abs(ratio - 1.0) < 2e-3) {
            converged = true;
            break;
        }
        b_scale = std::min(b_scale * ratio, b_cap);
    }
    if (!converged) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            assign_education(b_scale);
            try {
                beta_hat = coefficient_of(run_family(false).front(), "Education");
                break;
            } catch (const std::runtime_error&) {
                b_scale *= 0.25;  // last resort: keep spreading until it fits
            }
        }
    }
    out.education_scale = b_scale;
    out.achieved_beta = beta_hat;

    // MPCE profile f(occ) = base + t * (index^2), with t solved exactly from
    // the (affine) dependence of the fitted interaction coefficient on t
    std::vector<double> shape(static_cast<std::size_t>(c));
    for (int i = 0; i < c; ++i)
        shape[static_cast<std::size_t>(i)] = static_cast<double>(i) * static_cast<double>(i);
    std::vector<double> eta(out.records.size());
    for (std::size_t i = 0; i < out.records.size(); ++i) eta[i] = rng.normal(0.0, 20.0);

    std::map<std::string, std::size_t> occ_index;
    for (std::size_t i = 0; i < out.occupations.size(); ++i) occ_index[out.occupations[i]] = i;
    auto assign_mpce = [&](double t, double base) {
        for (std::size_t i = 0; i < out.records.size(); ++i) {
            const auto& occ = out.records[i].occupation;
            double f = base + eta[i];
            auto it = occ_index.find(occ);
            if (it != occ_index.end()) f += t * shape[it->second];
            out.records[i].mpce = f;
        }
    };

    const double probe_base = 1e7;  // large enough to keep probe MPCE positive
    assign_mpce(0.0, probe_base);
    const double gamma0 = coefficient_of(run_family(true).back(), "dij*Eij");
    assign_mpce(1.0, probe_base);
    const double gamma1 = coefficient_of(run_family(true).back(), "dij*Eij");
    if (std::abs(gamma1 - gamma0) < 1e-12)
        throw std::runtime_error("MPCE calibration failed: interaction insensitive to profile");
    const double t_star = (config.planted_gamma_interaction - gamma0) / (gamma1 - gamma0);

    double min_occ = 0.0;
    for (double s : shape) min_occ = std::min(min_occ, t_star * s);
    const double base = std::max(2000.0, 2000.0 - min_occ);
    assign_mpce(t_star, base);
    for (auto& r : out.records) {
        r.mpce = round_to(r.mpce, 4);
        if (r.mpce < 0) r.mpce = 0.0;  // eta tail guard; base keeps this rare
    }
    out.mpce_profile_scale = t_star;
    out.achieved_gamma = coefficient_of(run_family(true).back(), "dij*Eij");
    return out;
}

void write_synth_csv(const std::string& records_path, const std::string& truth_path,
                     const SynthResult& result) {
    write_canonical_csv(records_path, result.records);
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"param", "planted_beta_education", csv::format_double(result.planted_beta)});
    rows.push_back(
        {"param", "planted_gamma_interaction", csv::format_double(result.planted_gamma)});
    rows.push_back({"param", "achieved_beta", csv::format_double(result.achieved_beta)});
    rows.push_back({"param", "achieved_gamma", csv::format_double(result.achieved_gamma)});
    rows.push_back({"param", "education_scale", csv::format_double(result.education_scale)});
    rows.push_back(
        {"param", "mpce_profile_scale", csv::format_double(result.mpce_profile_scale)});
    for (const auto& [code, block] : result.block_of)
        rows.push_back({"block", code, std::to_string(block)});
    csv::write_file(truth_path, {"kind", "key", "value"}, rows);
}

OccupationGraph planted_partition_graph(int blocks, int per_block, double p_in, double w_in,
                                        double p_out, double w_out, std::uint64_t seed,
                                        std::vector<int>* labels_out) {
    if (blocks < 1 || per_block < 1) throw std::invalid_argument("empty planted partition");
    const int n = blocks * per_block;
    OccupationGraph g;
    g.length_rule = LengthRule::reciprocal;
    for (int i = 0; i < n; ++i) {
        std::string name = std::to_string(i);
        if (name.size() < 2) name = "0" + name;
        g.nodes.push_back(name);
    }
    if (labels_out) {
        labels_out->clear();
        for (int i = 0; i < n; ++i) labels_out->push_back(i / per_block);
    }
    Rng rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const bool same = (i / per_block) == (j / per_block);
            const double p = same ? p_in : p_out;
            const double w = same ? w_in : w_out;
            if (w > 0 && rng.bernoulli(p))
                g.edges.push_back({i, j, w, 1.0 / w});
        }
    return g;
}

}  // namespace stratmob
