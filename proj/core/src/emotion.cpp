#include "echograph/emotion.hpp"

#include "echograph/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_map>

namespace echograph {

namespace {

void require_two_communities(const Partition& pages) {
    if (pages.community_count() != 2)
        throw ContractError("this analysis needs a two-community page partition; got " +
                            std::to_string(pages.community_count()));
}

// Posts of partitioned pages, paired with their community.
std::vector<std::pair<const Post*, int>> partitioned_posts(const InteractionDataset& d,
                                                           const Partition& pages) {
    std::vector<std::pair<const Post*, int>> out;
    out.reserve(d.posts.size());
    for (const Post& post : d.posts) {
        auto side = pages.find(post.page_id);
        if (side) out.emplace_back(&post, *side);
    }
    return out;
}

struct ConceptStats {
    std::int64_t post_count = 0;
    std::int64_t scored_count = 0;
    double sentiment_sum = 0.0;
};

// concept -> per-community tallies, concepts normalized.
std::map<std::string, std::array<ConceptStats, 2>> concept_table(
    const std::vector<std::pair<const Post*, int>>& posts) {
    std::map<std::string, std::array<ConceptStats, 2>> table;
    for (const auto& [post, side] : posts) {
        std::set<std::string> seen;   // count each concept once per post
        for (const std::string& raw : post->concepts) {
            std::string c = normalize_concept(raw);
            if (c.empty() || !seen.insert(c).second) continue;
            ConceptStats& stats = table[c][static_cast<std::size_t>(side)];
            ++stats.post_count;
            if (post->sentiment) {
                ++stats.scored_count;
                stats.sentiment_sum += *post->sentiment;
            }
        }
    }
    return table;
}

} // namespace

std::string normalize_concept(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char ch : raw) {
        auto uc = static_cast<unsigned char>(ch);
        if (std::isspace(uc)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(uc)));
    }
    return out;
}

SentimentPdf sentiment_pdf(const InteractionDataset& d, const Partition& pages, int bins) {
    std::map<int, std::vector<double>> per_community;
    for (const auto& [post, side] : partitioned_posts(d, pages))
        if (post->sentiment) per_community[side].push_back(*post->sentiment);

    SentimentPdf out;
    for (int c = 0; c < pages.community_count(); ++c) {
        auto found = per_community.find(c);
        if (found == per_community.end() || found->second.empty()) {
            out.omitted.push_back(c);
            continue;
        }
        out.per_community.emplace_back(c, pdf(found->second, bins));
    }
    return out;
}

TopConcepts top_concepts(const InteractionDataset& d, const Partition& pages, int n) {
    if (n < 1) throw ParameterError("top concept count must be at least 1");
    require_two_communities(pages);
    auto table = concept_table(partitioned_posts(d, pages));

    TopConcepts out;
    for (int side = 0; side < 2; ++side) {
        std::vector<ConceptSentimentRecord> records;
        for (const auto& [concept_name, stats] : table) {
            const ConceptStats& s = stats[static_cast<std::size_t>(side)];
            if (s.post_count == 0) continue;
            ConceptSentimentRecord rec;
            rec.concept_name = concept_name;
            rec.community = side;
            rec.post_count = s.post_count;
            rec.scored_count = s.scored_count;
            rec.avg_sentiment =
                s.scored_count > 0 ? s.sentiment_sum / static_cast<double>(s.scored_count) : 0.0;
            records.push_back(std::move(rec));
        }
        std::sort(records.begin(), records.end(),
                  [](const ConceptSentimentRecord& a, const ConceptSentimentRecord& b) {
                      if (a.post_count != b.post_count) return a.post_count > b.post_count;
                      return a.concept_name < b.concept_name;
                  });
        // Keep everything tied with the n-th count.
        if (records.size() > static_cast<std::size_t>(n)) {
            std::int64_t cutoff = records[static_cast<std::size_t>(n) - 1].post_count;
            std::size_t end = static_cast<std::size_t>(n);
            while (end < records.size() && records[end].post_count == cutoff) ++end;
            records.resize(end);
        }
        (side == 0 ? out.first : out.second) = std::move(records);
    }

    std::set<std::string> first_set;
    for (const auto& rec : out.first) first_set.insert(rec.concept_name);
    for (const auto& rec : out.second)
        if (first_set.count(rec.concept_name)) out.shared.push_back(rec.concept_name);
    std::sort(out.shared.begin(), out.shared.end());
    return out;
}

EmotionalDistanceResult emotional_distance(const InteractionDataset& d, const Partition& pages,
                                           const std::vector<std::string>& concepts,
                                           double threshold) {
    if (!(threshold >= 0.0)) throw ParameterError("distance threshold must be nonnegative");
    require_two_communities(pages);
    auto table = concept_table(partitioned_posts(d, pages));

    EmotionalDistanceResult out;
    out.threshold = threshold;
    std::set<std::string> unique;
    for (const std::string& raw : concepts) unique.insert(normalize_concept(raw));
    for (const std::string& concept_name : unique) {
        auto found = table.find(concept_name);
        if (found == table.end() || found->second[0].scored_count == 0 ||
            found->second[1].scored_count == 0) {
            ++out.excluded;
            continue;
        }
        EmotionalDistanceRecord rec;
        rec.concept_name = concept_name;
        rec.first_avg =
            found->second[0].sentiment_sum / static_cast<double>(found->second[0].scored_count);
        rec.second_avg =
            found->second[1].sentiment_sum / static_cast<double>(found->second[1].scored_count);
        rec.distance = rec.second_avg - rec.first_avg;
        rec.controversial = std::abs(rec.distance) > threshold;
        out.records.push_back(std::move(rec));
    }
    std::sort(out.records.begin(), out.records.end(),
              [](const EmotionalDistanceRecord& a, const EmotionalDistanceRecord& b) {
                  double da = std::abs(a.distance), db = std::abs(b.distance);
                  if (da != db) return da > db;
                  return a.concept_name < b.concept_name;
              });
    for (const EmotionalDistanceRecord& rec : out.records) {
        if (rec.distance > threshold)
            out.panel_a.push_back(rec);
        else if (rec.distance < -threshold)
            out.panel_b.push_back(rec);
    }
    return out;
}

ResponseWeight parse_response_weight(const std::string& text) {
    if (text == "post") return ResponseWeight::post;
    if (text == "comment") return ResponseWeight::comment;
    throw ParameterError("unknown response weighting '" + text + "' (expected post or comment)");
}

ResponseResult emotional_response(const InteractionDataset& d, const Partition& pages,
                                  const std::vector<std::string>& concepts,
                                  ResponseWeight weight) {
    require_two_communities(pages);
    auto posts = partitioned_posts(d, pages);

    std::set<std::string> wanted;
    for (const std::string& raw : concepts) {
        std::string c = normalize_concept(raw);
        if (!c.empty()) wanted.insert(c);
    }

    // Scored comments grouped per post, plus per-user tallies.
    struct CommentAgg {
        double sum = 0.0;
        std::int64_t count = 0;
    };
    std::unordered_map<std::string, CommentAgg> comments_by_post;
    std::unordered_map<std::string, int> side_of_post;
    for (const auto& [post, side] : posts) side_of_post.emplace(post->id, side);

    std::map<std::pair<std::string, int>, CommentAgg> per_user;   // (user, side)
    std::set<std::string> concept_posts;   // posts mentioning a wanted concept
    for (const auto& [post, side] : posts) {
        (void)side;
        for (const std::string& raw : post->concepts) {
            if (wanted.count(normalize_concept(raw))) {
                concept_posts.insert(post->id);
                break;
            }
        }
    }
    for (const Interaction& it : d.interactions) {
        if (it.kind != InteractionKind::comment || !it.sentiment) continue;
        auto side_it = side_of_post.find(it.post_id);
        if (side_it == side_of_post.end()) continue;
        auto& agg = comments_by_post[it.post_id];
        agg.sum += *it.sentiment;
        ++agg.count;
        if (concept_posts.count(it.post_id)) {
            auto& ua = per_user[{it.user_id, side_it->second}];
            ua.sum += *it.sentiment;
            ++ua.count;
        }
    }

    struct SideAgg {
        double post_sum = 0.0;
        std::int64_t post_count = 0;
        double comment_mean_sum = 0.0;    // per-post means (post weighting)
        double comment_sum = 0.0;         // pooled comments (comment weighting)
        std::int64_t comment_count = 0;
        std::int64_t commented_posts = 0;
        std::int64_t uncommented_posts = 0;
    };
    std::map<std::pair<std::string, int>, SideAgg> agg;
    for (const auto& [post, side] : posts) {
        if (!post->sentiment) continue;
        std::set<std::string> seen;
        for (const std::string& raw : post->concepts) {
            std::string c = normalize_concept(raw);
            if (!wanted.count(c) || !seen.insert(c).second) continue;
            SideAgg& sa = agg[{c, side}];
            sa.post_sum += *post->sentiment;
            ++sa.post_count;
            auto cit = comments_by_post.find(post->id);
            if (cit != comments_by_post.end() && cit->second.count > 0) {
                sa.comment_mean_sum +=
                    cit->second.sum / static_cast<double>(cit->second.count);
                sa.comment_sum += cit->second.sum;
                sa.comment_count += cit->second.count;
                ++sa.commented_posts;
            } else {
                ++sa.uncommented_posts;
            }
        }
    }

    ResponseResult out;
    std::set<std::string> concepts_seen, concepts_kept;
    for (const auto& [key, sa] : agg) {
        concepts_seen.insert(key.first);
        out.posts_without_comments += static_cast<std::size_t>(sa.uncommented_posts);
        if (sa.commented_posts == 0) continue;
        concepts_kept.insert(key.first);
        ResponseRecord rec;
        rec.concept_name = key.first;
        rec.community = key.second;
        rec.post_avg = sa.post_sum / static_cast<double>(sa.post_count);
        rec.comment_avg = weight == ResponseWeight::post
                              ? sa.comment_mean_sum / static_cast<double>(sa.commented_posts)
                              : sa.comment_sum / static_cast<double>(sa.comment_count);
        rec.gap = rec.comment_avg - rec.post_avg;
        rec.post_count = sa.post_count;
        rec.commented_post_count = sa.commented_posts;
        out.records.push_back(std::move(rec));
    }
    out.skipped_concepts = concepts_seen.size() - concepts_kept.size();
    std::sort(out.records.begin(), out.records.end(),
              [](const ResponseRecord& a, const ResponseRecord& b) {
                  if (a.gap != b.gap) return a.gap < b.gap;
                  if (a.concept_name != b.concept_name) return a.concept_name < b.concept_name;
                  return a.community < b.community;
              });
    out.sign_change_index = out.records.size();
    for (std::size_t i = 0; i < out.records.size(); ++i) {
        if (out.records[i].gap >= 0.0) {
            out.sign_change_index = i;
            break;
        }
    }

    for (const auto& [key, ua] : per_user) {
        UserResponseRecord rec;
        rec.user_id = key.first;
        rec.community = key.second;
        rec.comment_avg = ua.sum / static_cast<double>(ua.count);
        rec.comment_count = ua.count;
        out.per_user.push_back(std::move(rec));
    }
    return out;
}

LexiconScorer::LexiconScorer(std::map<std::string, double> valence,
                             std::set<std::string> concept_vocab)
    : valence_(std::move(valence)), concepts_(std::move(concept_vocab)) {}

std::optional<ScoredText> LexiconScorer::score(const std::string& text) {
    ScoredText out;
    std::set<std::string> found;
    std::string token;
    double sum = 0.0;
    std::int64_t matched = 0;
    auto flush = [&] {
        if (token.empty()) return;
        auto v = valence_.find(token);
        if (v != valence_.end()) {
            sum += v->second;
            ++matched;
        }
        if (concepts_.count(token)) found.insert(token);
        token.clear();
    };
    for (char ch : text) {
        auto uc = static_cast<unsigned char>(ch);
        if (std::isalnum(uc))
            token.push_back(static_cast<char>(std::tolower(uc)));
        else
            flush();
    }
    flush();
    if (matched > 0) out.sentiment = std::clamp(sum / static_cast<double>(matched), -1.0, 1.0);
    out.concepts.assign(found.begin(), found.end());
    return out;
}

ScoreOutcome score_with_provider(const std::vector<std::string>& texts,
                                 SentimentProvider& provider) {
    ScoreOutcome out;
    out.scored.reserve(texts.size());
    for (const std::string& text : texts) {
        auto scored = provider.score(text);
        if (!scored) ++out.failures;
        out.scored.push_back(std::move(scored));
    }
    return out;
}

std::size_t apply_provider(InteractionDataset& d, SentimentProvider& provider,
                           std::size_t* failures) {
    std::size_t filled = 0;
    std::size_t failed = 0;
    for (Post& post : d.posts) {
        if (post.sentiment && !post.concepts.empty()) continue;
        if (!post.text) continue;
        auto scored = provider.score(*post.text);
        if (!scored) {
            ++failed;
            continue;
        }
        if (!post.sentiment) post.sentiment = scored->sentiment;
        if (post.concepts.empty()) post.concepts = scored->concepts;
        ++filled;
    }
    if (failures) *failures = failed;
    return filled;
}

} // namespace echograph
