#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stratmob/ingest.hpp"
#include "stratmob/netgraph.hpp"

namespace stratmob {

/// Configuration of the synthetic survey generator.
///
/// Occupations are split into n_blocks contiguous blocks arranged on a line.
/// Every household gets an origin member plus 1..k further working members;
/// each further member draws an occupation from the origin's block with
/// probability within_tie_prob, from another block (biased toward nearby,
/// higher blocks) with probability cross_tie_prob, and duplicates the origin
/// occupation with the remainder. Education is then derived from each
/// member's realized network distance to the origin occupation and MPCE from
/// a per-occupation profile, both calibrated so the fitted pipeline
/// coefficients land on the planted values.
struct SynthConfig {
    int n_households = 2000;
    int n_occupations = 32;
    int n_blocks = 4;
    double within_tie_prob = 0.7;
    double cross_tie_prob = 0.3;
    int members_min = 2;   // including the origin member
    int members_max = 5;
    double planted_beta_education = 3.0;
    double planted_gamma_interaction = 5.0;
    double noise_sd = 2.0;
    std::uint64_t seed = 42;
};

struct SynthResult {
    std::vector<IndividualRecord> records;
    std::vector<std::string> occupations;     // codes used
    std::map<std::string, int> block_of;      // planted block per code
    double planted_beta = 0.0;
    double planted_gamma = 0.0;
    double achieved_beta = 0.0;               // pipeline fit on the generated data
    double achieved_gamma = 0.0;
    double education_scale = 0.0;             // calibrated distance-per-year
    double mpce_profile_scale = 0.0;          // calibrated occupation MPCE slope
};

/// Deterministic per seed. Throws on infeasible configs (probabilities out of
/// range, no block structure, planted beta of zero with nonzero data).
SynthResult generate(const SynthConfig& config);

/// Writes the records in the canonical ingest schema plus the ground-truth
/// sidecar (block labels and planted/achieved coefficients).
void write_synth_csv(const std::string& records_path, const std::string& truth_path,
                     const SynthResult& result);

/// Direct planted-partition benchmark graph: blocks*per_block nodes; each
/// within-block pair carries an edge of strength w_in with probability p_in,
/// each cross-block pair strength w_out with probability p_out. labels_out
/// receives the planted block of every node.
OccupationGraph planted_partition_graph(int blocks, int per_block, double p_in, double w_in,
                                        double p_out, double w_out, std::uint64_t seed,
                                        std::vector<int>* labels_out = nullptr);

}  // namespace stratmob
