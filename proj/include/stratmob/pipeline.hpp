#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "stratmob/ingest.hpp"
#include "stratmob/mobility.hpp"
#include "stratmob/netgraph.hpp"
#include "stratmob/project.hpp"

namespace stratmob {

inline constexpr const char* kToolVersion = "1.0.0";

/// Everything a run needs; also what the manifest snapshots.
struct PipelineOptions {
    std::string input;             // survey CSV (ingest / pipeline)
    std::string out_dir = "out";   // all stage files live here
    ColumnMap columns;
    bool strict = false;
    int min_households = 10;
    TotalWeightMode h_mode = TotalWeightMode::weighted;
    LengthRule length_rule = LengthRule::reciprocal;
    double resolution = 1.0;
    double layout_width = 1200.0;
    double layout_height = 900.0;
    int layout_iterations = 500;
    double edge_quantile = 0.75;   // SVG strength threshold
    OriginRule origin_rule = OriginRule::edu_then_age;
    EconomicDistanceMode ed_mode = EconomicDistanceMode::signed_mode;
    double dij_scale = 1.0;
    std::string reference_social_group;
    bool weighted_regression = false;
    bool clustered = false;
    std::string group_by;          // pipeline only: per-group sub-runs
    std::uint64_t seed = 42;
    bool deterministic = false;    // omit timestamps for byte-identical reruns
};

/// Raised for usage / bad-input conditions that should exit with code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// FNV-1a (64-bit) digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::string& path);

/// Manifest text: tool version, option snapshot, input digest, seed, and a
/// timestamp unless options.deterministic is set.
std::string manifest_text(const PipelineOptions& options);

/// One file-based stage: ingest | network | distances | communities | layout
/// | mobility | regress. Reads prerequisites from options.out_dir, writes the
/// stage's files there, and prints the stage diagnostics to `out`. Throws
/// UsageError when a prerequisite file is missing (named in the message).
void run_stage(const std::string& stage, const PipelineOptions& options, std::ostream& out);

/// Full run: ingest through regress into options.out_dir (nine files,
/// including manifest.txt and diagnostics.txt). With group_by set to a
/// multi-valued column, each group runs into its own subdirectory. Returns the
/// process exit code (0 ok, 1 internal error with FAILED marker, 2 usage);
/// error text goes to `err`.
int run_pipeline(const PipelineOptions& options, std::ostream& err);

}  // namespace stratmob
