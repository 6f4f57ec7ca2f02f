#pragma once

#include "echograph/community.hpp"
#include "echograph/dataset.hpp"
#include "echograph/polarization.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace echograph {

/// Lowercases and collapses whitespace runs to single spaces, trimming
/// the ends. Concept matching is exact on the normalized string.
std::string normalize_concept(const std::string& raw);

/// Per-community histogram of post sentiment over [-1, 1]. Communities
/// without any scored post are listed in `omitted` instead.
struct SentimentPdf {
    std::vector<std::pair<int, Histogram>> per_community;
    std::vector<int> omitted;
};

SentimentPdf sentiment_pdf(const InteractionDataset& d, const Partition& pages,
                           int bins = kDefaultPolarizationBins);

struct ConceptSentimentRecord {
    std::string concept_name;
    int community = 0;
    std::int64_t post_count = 0;     // posts in the community mentioning the concept
    std::int64_t scored_count = 0;   // subset carrying a sentiment score
    double avg_sentiment = 0.0;      // mean over the scored subset, 0 when none
};

struct TopConcepts {
    std::vector<ConceptSentimentRecord> first;    // community 0, ranked
    std::vector<ConceptSentimentRecord> second;   // community 1, ranked
    std::vector<std::string> shared;              // intersection, sorted
};

/// Ranks concepts per community by post count (descending), ties broken
/// lexicographically; every concept tied with the n-th count is included,
/// so lists may exceed n. The partition must have exactly two communities.
TopConcepts top_concepts(const InteractionDataset& d, const Partition& pages, int n);

struct EmotionalDistanceRecord {
    std::string concept_name;
    double first_avg = 0.0;
    double second_avg = 0.0;
    double distance = 0.0;        // second_avg - first_avg, in [-2, 2]
    bool controversial = false;   // |distance| > threshold
};

struct EmotionalDistanceResult {
    std::vector<EmotionalDistanceRecord> records;   // descending |distance|
    std::vector<EmotionalDistanceRecord> panel_a;   // distance > threshold: first side more negative
    std::vector<EmotionalDistanceRecord> panel_b;   // distance < -threshold: second side more negative
    std::size_t excluded = 0;   // concepts lacking a scored post on one side
    double threshold = 0.2;
};

inline constexpr double kDefaultDistanceThreshold = 0.2;

/// Average-sentiment gap between the two communities for each shared
/// concept. Concepts without at least one scored post on both sides are
/// excluded and counted.
EmotionalDistanceResult emotional_distance(const InteractionDataset& d, const Partition& pages,
                                           const std::vector<std::string>& concepts,
                                           double threshold = kDefaultDistanceThreshold);

enum class ResponseWeight { post, comment };

ResponseWeight parse_response_weight(const std::string& text);

struct ResponseRecord {
    std::string concept_name;
    int community = 0;
    double post_avg = 0.0;      // mean sentiment of scored posts mentioning the concept
    double comment_avg = 0.0;   // per-post comment means averaged (post weighting) or pooled
    double gap = 0.0;           // comment_avg - post_avg
    std::int64_t post_count = 0;
    std::int64_t commented_post_count = 0;
};

struct UserResponseRecord {
    std::string user_id;
    int community = 0;
    double comment_avg = 0.0;
    std::int64_t comment_count = 0;
};

struct ResponseResult {
    std::vector<ResponseRecord> records;   // ascending gap
    /// Index of the first record with gap >= 0; equals records.size()
    /// when every gap is negative.
    std::size_t sign_change_index = 0;
    std::vector<UserResponseRecord> per_user;   // auxiliary per-user averages
    std::size_t posts_without_comments = 0;
    std::size_t skipped_concepts = 0;   // no scored comments on either side
};

/// Mean emotional response of commenters versus the posts they comment
/// on, per concept and community. With post weighting each post's comment
/// mean counts once; with comment weighting every comment counts equally.
ResponseResult emotional_response(const InteractionDataset& d, const Partition& pages,
                                  const std::vector<std::string>& concepts,
                                  ResponseWeight weight = ResponseWeight::post);

struct ScoredText {
    double sentiment = 0.0;
    std::vector<std::string> concepts;
};

/// Extension seam for sentiment/concept scoring backends.
class SentimentProvider {
  public:
    virtual ~SentimentProvider() = default;
    /// Scores one text; nullopt signals a per-text failure.
    virtual std::optional<ScoredText> score(const std::string& text) = 0;
};

/// Reference scorer for fixtures: sentiment is the mean valence of known
/// tokens clipped to [-1, 1] (0 when no token matches), concepts are the
/// tokens found in the vocabulary.
class LexiconScorer : public SentimentProvider {
  public:
    LexiconScorer(std::map<std::string, double> valence, std::set<std::string> concept_vocab);
    std::optional<ScoredText> score(const std::string& text) override;

  private:
    std::map<std::string, double> valence_;
    std::set<std::string> concepts_;
};

struct ScoreOutcome {
    std::vector<std::optional<ScoredText>> scored;   // aligned with the input texts
    std::size_t failures = 0;
};

ScoreOutcome score_with_provider(const std::vector<std::string>& texts,
                                 SentimentProvider& provider);

/// Fills missing post sentiment/concepts from post text via the provider.
/// Returns the number of posts filled; failures leave fields absent and
/// are counted through `failures` when given.
std::size_t apply_provider(InteractionDataset& d, SentimentProvider& provider,
                           std::size_t* failures = nullptr);

} // namespace echograph
