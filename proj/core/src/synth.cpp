#include "echograph/synth.hpp"

#include "echograph/emotion.hpp"
#include "echograph/errors.hpp"
#include "echograph/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_set>

namespace echograph {

namespace {

constexpr std::int64_t kBaseTimestamp = 1451606400;   // 2016-01-01T00:00:00Z
constexpr std::int64_t kPostSpacing = 3600;
constexpr std::int64_t kReactionWindow = 30LL * 86400; // likes/comments within 30 days

std::string padded(const char* prefix, int index, int width) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, index);
    return buf;
}

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ParameterError(std::string(what) + " must be a probability in [0, 1]");
}

double clip_unit(double v) { return std::clamp(v, -1.0, 1.0); }

struct SummaryTally {
    DatasetSummary counts;
    std::unordered_set<std::string> likers;
    std::unordered_set<std::string> commenters;

    DatasetSummary finish() {
        counts.likers = likers.size();
        counts.commenters = commenters.size();
        return counts;
    }
};

} // namespace

void SynthConfig::validate() const {
    if (n_pages_per_block < 1) throw ParameterError("need at least one page per block");
    if (n_users_per_block < 1) throw ParameterError("need at least one user per block");
    if (n_users_second_block < 0) throw ParameterError("second block user count cannot be negative");
    if (n_decoy_pages < 0) throw ParameterError("decoy page count cannot be negative");
    if (posts_per_page < 1) throw ParameterError("need at least one post per page");
    require_probability(p_in, "p_in");
    require_probability(p_out, "p_out");
    require_probability(comment_p_in, "comment_p_in");
    require_probability(comment_p_out, "comment_p_out");
    for (double m : sentiment_means)
        if (!(m > -1.0 && m < 1.0))
            throw ParameterError("block sentiment means must lie in (-1, 1)");
    if (!(sentiment_noise >= 0.0) || !(comment_noise >= 0.0))
        throw ParameterError("noise levels must be nonnegative");
    if (!std::isfinite(comment_shift)) throw ParameterError("comment shift must be finite");
    std::set<std::string> names;
    for (const ConceptSpec& c : concepts) {
        std::string norm = normalize_concept(c.name);
        if (norm.empty()) throw ParameterError("concept names cannot be empty");
        if (!names.insert(norm).second)
            throw ParameterError("duplicate concept name '" + norm + "'");
        for (double f : c.frequency) require_probability(f, "concept frequency");
        for (double o : c.sentiment_offset)
            if (!std::isfinite(o)) throw ParameterError("concept sentiment offsets must be finite");
    }
}

double GroundTruthLedger::concept_mean(const std::string& concept_name, int block) const {
    auto count_it = concept_post_count.find(concept_name);
    auto sum_it = concept_sentiment_sum.find(concept_name);
    if (count_it == concept_post_count.end() || sum_it == concept_sentiment_sum.end())
        throw ParameterError("ledger has no concept '" + concept_name + "'");
    auto b = static_cast<std::size_t>(block);
    if (block < 0 || b >= count_it->second.size() || count_it->second[b] == 0)
        throw ParameterError("concept '" + concept_name + "' has no posts in that block");
    return sum_it->second[b] / static_cast<double>(count_it->second[b]);
}

SynthOutput generate(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    SynthOutput out;
    InteractionDataset& data = out.dataset;
    GroundTruthLedger& ledger = out.ledger;
    ledger.rng_algorithm = Rng::kAlgorithm;
    ledger.seed = cfg.seed;
    data.provenance = "synthetic";

    // Pages: block 0, block 1, then decoys (block -1, not engaged).
    struct PageInfo {
        std::string id;
        int block = -1;
    };
    std::vector<PageInfo> pages;
    for (int block = 0; block < 2; ++block) {
        const char* prefix = block == 0 ? "page_a_" : "page_b_";
        for (int i = 1; i <= cfg.n_pages_per_block; ++i) {
            PageInfo info{padded(prefix, i, 3), block};
            data.pages.push_back({info.id, info.id, true, std::nullopt});
            ledger.page_block[info.id] = block;
            pages.push_back(std::move(info));
        }
    }
    for (int i = 1; i <= cfg.n_decoy_pages; ++i) {
        PageInfo info{padded("page_x_", i, 3), -1};
        data.pages.push_back({info.id, info.id, false, std::nullopt});
        ledger.page_block[info.id] = -1;
        pages.push_back(std::move(info));
    }

    // Users: block 0 first, then block 1, globally numbered.
    std::vector<std::pair<std::string, int>> users;
    int user_index = 0;
    for (int block = 0; block < 2; ++block) {
        for (int i = 0; i < cfg.users_in_block(block); ++i) {
            users.emplace_back(padded("user_", ++user_index, 6), block);
            ledger.user_block[users.back().first] = block;
        }
    }

    // Posts. Draw order per post: one Bernoulli per concept (block pages
    // only, config order), then one normal for the sentiment noise.
    struct PostInfo {
        std::string id;
        int block = -1;
        double sentiment = 0.0;
        std::int64_t ts = 0;
    };
    std::vector<PostInfo> posts;
    int post_counter = 0;
    for (const PageInfo& page : pages) {
        for (int i = 1; i <= cfg.posts_per_page; ++i) {
            PostInfo info;
            info.id = page.id + padded("_post_", i, 3);
            info.block = page.block;
            info.ts = kBaseTimestamp + kPostSpacing * post_counter++;

            Post record;
            record.id = info.id;
            record.page_id = page.id;
            record.timestamp = info.ts;

            double mean = 0.0;
            if (page.block >= 0) {
                mean = cfg.sentiment_means[static_cast<std::size_t>(page.block)];
                for (const ConceptSpec& c : cfg.concepts) {
                    if (!rng.bernoulli(c.frequency[static_cast<std::size_t>(page.block)]))
                        continue;
                    record.concepts.push_back(normalize_concept(c.name));
                    mean += c.sentiment_offset[static_cast<std::size_t>(page.block)];
                }
            }
            info.sentiment = clip_unit(mean + cfg.sentiment_noise * rng.normal());
            record.sentiment = info.sentiment;

            if (page.block >= 0) {
                for (const std::string& concept_name : record.concepts) {
                    auto b = static_cast<std::size_t>(page.block);
                    ++ledger.concept_post_count[concept_name][b];
                    ledger.concept_sentiment_sum[concept_name][b] += info.sentiment;
                }
            }
            data.posts.push_back(std::move(record));
            posts.push_back(std::move(info));
        }
    }

    // Interactions. Per post: one like Bernoulli per user (timestamp drawn
    // only on success), then one comment Bernoulli per user (timestamp and
    // sentiment noise drawn only on success). Decoy pages count as
    // out-block for everyone.
    SummaryTally full, engaged;
    full.counts.pages = data.pages.size();
    full.counts.posts = data.posts.size();
    engaged.counts.pages = static_cast<std::size_t>(2 * cfg.n_pages_per_block);
    engaged.counts.posts =
        static_cast<std::size_t>(2 * cfg.n_pages_per_block) *
        static_cast<std::size_t>(cfg.posts_per_page);

    for (const PostInfo& post : posts) {
        bool on_engaged = post.block >= 0;
        for (const auto& [user, block] : users) {
            double p = (post.block == block) ? cfg.p_in : cfg.p_out;
            if (!rng.bernoulli(p)) continue;
            Interaction like;
            like.user_id = user;
            like.post_id = post.id;
            like.kind = InteractionKind::like;
            like.timestamp = post.ts + static_cast<std::int64_t>(
                                           rng.uniform_int(static_cast<std::uint64_t>(kReactionWindow)));
            data.interactions.push_back(std::move(like));
            ++full.counts.likes;
            full.likers.insert(user);
            if (on_engaged) {
                ++engaged.counts.likes;
                engaged.likers.insert(user);
                ++ledger.user_like_counts[user][static_cast<std::size_t>(post.block)];
            }
        }
        for (const auto& [user, block] : users) {
            double p = (post.block == block) ? cfg.comment_p_in : cfg.comment_p_out;
            if (!rng.bernoulli(p)) continue;
            Interaction comment;
            comment.user_id = user;
            comment.post_id = post.id;
            comment.kind = InteractionKind::comment;
            comment.timestamp = post.ts + static_cast<std::int64_t>(
                                              rng.uniform_int(static_cast<std::uint64_t>(kReactionWindow)));
            comment.sentiment =
                clip_unit(post.sentiment + cfg.comment_shift + cfg.comment_noise * rng.normal());
            ++full.counts.comments;
            full.commenters.insert(user);
            if (on_engaged) {
                ++engaged.counts.comments;
                engaged.commenters.insert(user);
                ++ledger.user_comment_counts[user][static_cast<std::size_t>(post.block)];
            }
            auto [window, inserted] = ledger.comment_window.try_emplace(
                user, std::make_pair(comment.timestamp, comment.timestamp));
            if (!inserted) {
                window->second.first = std::min(window->second.first, comment.timestamp);
                window->second.second = std::max(window->second.second, comment.timestamp);
            }
            data.interactions.push_back(std::move(comment));
        }
    }

    ledger.summary = full.finish();
    ledger.engaged_summary = engaged.finish();
    return out;
}

SynthConfig parse_synth_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("config must be a JSON object");

    SynthConfig cfg;
    static const std::set<std::string> known = {
        "n_pages_per_block", "n_users_per_block", "n_users_second_block", "n_decoy_pages",
        "posts_per_page",    "p_in",              "p_out",                "comment_p_in",
        "comment_p_out",     "sentiment_means",   "sentiment_noise",      "comment_shift",
        "comment_noise",     "concepts",          "seed"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) throw ParseError("unknown config key '" + key + "'");
    }
    try {
        cfg.n_pages_per_block = j.value("n_pages_per_block", cfg.n_pages_per_block);
        cfg.n_users_per_block = j.value("n_users_per_block", cfg.n_users_per_block);
        cfg.n_users_second_block = j.value("n_users_second_block", cfg.n_users_second_block);
        cfg.n_decoy_pages = j.value("n_decoy_pages", cfg.n_decoy_pages);
        cfg.posts_per_page = j.value("posts_per_page", cfg.posts_per_page);
        cfg.p_in = j.value("p_in", cfg.p_in);
        cfg.p_out = j.value("p_out", cfg.p_out);
        cfg.comment_p_in = j.value("comment_p_in", cfg.comment_p_in);
        cfg.comment_p_out = j.value("comment_p_out", cfg.comment_p_out);
        cfg.sentiment_noise = j.value("sentiment_noise", cfg.sentiment_noise);
        cfg.comment_shift = j.value("comment_shift", cfg.comment_shift);
        cfg.comment_noise = j.value("comment_noise", cfg.comment_noise);
        cfg.seed = j.value("seed", cfg.seed);
        if (j.contains("sentiment_means")) {
            auto means = j.at("sentiment_means");
            if (!means.is_array() || means.size() != 2)
                throw ParseError("sentiment_means must be a two-element array");
            cfg.sentiment_means = {means.at(0).get<double>(), means.at(1).get<double>()};
        }
        if (j.contains("concepts")) {
            for (const auto& cj : j.at("concepts")) {
                ConceptSpec spec;
                spec.name = cj.at("name").get<std::string>();
                auto freq = cj.at("frequency");
                auto offset = cj.at("sentiment_offset");
                if (!freq.is_array() || freq.size() != 2 || !offset.is_array() ||
                    offset.size() != 2)
                    throw ParseError("concept frequency and sentiment_offset must be "
                                     "two-element arrays");
                spec.frequency = {freq.at(0).get<double>(), freq.at(1).get<double>()};
                spec.sentiment_offset = {offset.at(0).get<double>(), offset.at(1).get<double>()};
                cfg.concepts.push_back(std::move(spec));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad config field: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string synth_config_json(const SynthConfig& cfg) {
    nlohmann::ordered_json j;
    j["n_pages_per_block"] = cfg.n_pages_per_block;
    j["n_users_per_block"] = cfg.n_users_per_block;
    j["n_users_second_block"] = cfg.n_users_second_block;
    j["n_decoy_pages"] = cfg.n_decoy_pages;
    j["posts_per_page"] = cfg.posts_per_page;
    j["p_in"] = cfg.p_in;
    j["p_out"] = cfg.p_out;
    j["comment_p_in"] = cfg.comment_p_in;
    j["comment_p_out"] = cfg.comment_p_out;
    j["sentiment_means"] = cfg.sentiment_means;
    j["sentiment_noise"] = cfg.sentiment_noise;
    j["comment_shift"] = cfg.comment_shift;
    j["comment_noise"] = cfg.comment_noise;
    j["concepts"] = nlohmann::ordered_json::array();
    for (const ConceptSpec& c : cfg.concepts) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["frequency"] = c.frequency;
        cj["sentiment_offset"] = c.sentiment_offset;
        j["concepts"].push_back(std::move(cj));
    }
    j["seed"] = cfg.seed;
    return j.dump(2) + "\n";
}

std::string ledger_json(const GroundTruthLedger& ledger) {
    nlohmann::ordered_json j;
    j["rng_algorithm"] = ledger.rng_algorithm;
    j["seed"] = ledger.seed;
    j["page_block"] = ledger.page_block;
    j["user_block"] = ledger.user_block;
    j["user_like_counts"] = ledger.user_like_counts;
    j["user_comment_counts"] = ledger.user_comment_counts;
    j["concept_post_count"] = ledger.concept_post_count;
    j["concept_sentiment_sum"] = ledger.concept_sentiment_sum;
    nlohmann::ordered_json windows = nlohmann::ordered_json::object();
    for (const auto& [user, window] : ledger.comment_window)
        windows[user] = {window.first, window.second};
    j["comment_window"] = std::move(windows);
    auto summary_json = [](const DatasetSummary& s) {
        nlohmann::ordered_json out;
        out["pages"] = s.pages;
        out["posts"] = s.posts;
        out["likes"] = s.likes;
        out["comments"] = s.comments;
        out["likers"] = s.likers;
        out["commenters"] = s.commenters;
        return out;
    };
    j["summary"] = summary_json(ledger.summary);
    j["engaged_summary"] = summary_json(ledger.engaged_summary);
    return j.dump(2) + "\n";
}

} // namespace echograph
