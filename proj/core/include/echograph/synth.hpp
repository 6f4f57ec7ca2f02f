#pragma once

#include "echograph/dataset.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace echograph {

/// One synthetic concept: how often posts of each block mention it and
/// how it shifts the post's sentiment when present.
struct ConceptSpec {
    std::string name;
    std::array<double, 2> frequency{0.0, 0.0};          // per block
    std::array<double, 2> sentiment_offset{0.0, 0.0};   // added to the block mean
};

/// Two planted page/user blocks plus optional decoy pages. Users like and
/// comment on each post of in-block pages with p_in / comment_p_in and on
/// out-block pages (decoys included) with p_out / comment_p_out. Post
/// sentiment is the block mean plus concept offsets plus Gaussian noise,
/// clipped to [-1, 1]; comment sentiment is the post's sentiment plus
/// comment_shift plus noise, clipped likewise.
struct SynthConfig {
    int n_pages_per_block = 4;
    int n_users_per_block = 200;
    int n_users_second_block = 0;   // 0 means same as n_users_per_block
    int n_decoy_pages = 0;          // non-engaged pages, no concepts attached
    int posts_per_page = 5;
    double p_in = 0.5;
    double p_out = 0.02;
    double comment_p_in = 0.1;
    double comment_p_out = 0.01;
    std::array<double, 2> sentiment_means{-0.4, -0.1};
    double sentiment_noise = 0.1;
    double comment_shift = -0.2;
    double comment_noise = 0.1;
    std::vector<ConceptSpec> concepts;
    std::uint64_t seed = 42;

    int users_in_block(int block) const {
        return block == 1 && n_users_second_block > 0 ? n_users_second_block : n_users_per_block;
    }
    /// Throws ParameterError when counts or probabilities are out of range.
    void validate() const;
};

/// Event-by-event bookkeeping of what the generator actually emitted, so
/// tests can compare analysis output against the truth exactly. Decoy
/// pages map to block -1 and are excluded from the per-user counts.
struct GroundTruthLedger {
    std::string rng_algorithm;
    std::uint64_t seed = 0;
    std::map<std::string, int> page_block;
    std::map<std::string, int> user_block;
    std::map<std::string, std::array<std::int64_t, 2>> user_like_counts;      // per page block
    std::map<std::string, std::array<std::int64_t, 2>> user_comment_counts;
    std::map<std::string, std::array<std::int64_t, 2>> concept_post_count;
    std::map<std::string, std::array<double, 2>> concept_sentiment_sum;
    // first/last comment timestamp per user, only users who commented
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> comment_window;
    DatasetSummary summary;           // full emitted dataset
    DatasetSummary engaged_summary;   // engaged pages only

    double concept_mean(const std::string& concept_name, int block) const;
};

struct SynthOutput {
    InteractionDataset dataset;
    GroundTruthLedger ledger;
};

/// Deterministic for a given config: same seed, same bytes.
SynthOutput generate(const SynthConfig& cfg);

/// JSON round-trip for configs (CLI --config files). Unknown keys are
/// rejected; missing keys keep their defaults.
SynthConfig parse_synth_config(const std::string& json_text);
std::string synth_config_json(const SynthConfig& cfg);

/// Ledger serialization for the CLI synth output.
std::string ledger_json(const GroundTruthLedger& ledger);

} // namespace echograph
