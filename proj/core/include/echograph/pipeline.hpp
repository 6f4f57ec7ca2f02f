#pragma once

#include "echograph/backbone.hpp"
#include "echograph/community.hpp"
#include "echograph/dataset_io.hpp"
#include "echograph/emotion.hpp"
#include "echograph/polarization.hpp"
#include "echograph/statfit.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace echograph {

inline constexpr const char* kToolName = "echograph";
inline constexpr const char* kToolVersion = "0.1.0";

struct PipelineOptions {
    std::uint64_t seed = 42;
    DataFormat format = DataFormat::jsonl;
    /// Keep going when ingest rejects malformed records (they are skipped
    /// and reported); strict mode aborts instead.
    bool lenient = false;
    double alpha = kFigureAlpha;
    BackboneRule rule = BackboneRule::any;
    /// Partition driving polarization and emotion stages.
    CommunityAlgorithm algorithm = CommunityAlgorithm::fast_greedy;
    /// Detect communities on the backbone instead of the full projection.
    bool on_backbone = false;
    InteractionKind polarization_kind = InteractionKind::like;
    double tau = 1.0;
    int pdf_bins = kDefaultPolarizationBins;
    int top_n = 100;
    double distance_threshold = kDefaultDistanceThreshold;
    ResponseWeight response_weight = ResponseWeight::post;
};

/// Result of a full pipeline run. report_json is also written to
/// report.json in the output directory, alongside projection.csv,
/// backbone.csv, user_response.csv, and fig1..fig6 CSVs; a failed stage
/// aborts the run but keeps everything produced before it.
struct PipelineReport {
    std::string report_json;
    std::vector<std::string> warnings;
    std::optional<std::string> aborted_stage;
    std::string error_message;
    /// 0 clean, 2 input error, 3 contract error, 4 finished with warnings.
    int exit_code = 0;

    bool ok() const { return !aborted_stage.has_value(); }
};

/// Carries ingest bookkeeping into the report when the pipeline starts
/// from a file.
struct IngestStats {
    std::size_t rejected = 0;
    std::size_t duplicates_dropped = 0;
};

/// ingest -> filter_engaged -> build_bipartite -> project -> {backbone,
/// communities} -> polarization -> {ccdf, fits, KS} -> emotion. All
/// randomness fans out from options.seed via per-stage derived seeds, so
/// reruns with the same inputs are byte-identical.
PipelineReport run_pipeline(const InteractionDataset& raw, const PipelineOptions& options,
                            const std::filesystem::path& out_dir,
                            const std::optional<IngestStats>& ingest_stats = std::nullopt);

/// Same, starting from a dataset file or CSV directory.
PipelineReport run_pipeline_file(const std::filesystem::path& input,
                                 const PipelineOptions& options,
                                 const std::filesystem::path& out_dir);

} // namespace echograph
