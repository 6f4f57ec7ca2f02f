#pragma once

#include <echograph/dataset.hpp>

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace testutil {

using echograph::Interaction;
using echograph::InteractionDataset;
using echograph::InteractionKind;
using echograph::Page;
using echograph::Post;

inline Page page(std::string id, bool engaged = true, std::optional<int> community = std::nullopt) {
    Page p;
    p.id = id;
    p.name = "page " + id;
    p.engaged = engaged;
    p.community = community;
    return p;
}

inline Post post(std::string id, std::string page_id, std::int64_t ts = 1000,
                 std::optional<double> sentiment = std::nullopt,
                 std::vector<std::string> concepts = {}) {
    Post p;
    p.id = id;
    p.page_id = page_id;
    p.timestamp = ts;
    p.sentiment = sentiment;
    p.concepts = std::move(concepts);
    return p;
}

inline Interaction like(std::string user, std::string post_id, std::int64_t ts = 2000) {
    Interaction i;
    i.user_id = user;
    i.post_id = post_id;
    i.kind = InteractionKind::like;
    i.timestamp = ts;
    return i;
}

inline Interaction comment(std::string user, std::string post_id, std::int64_t ts = 2000,
                           std::optional<double> sentiment = std::nullopt) {
    Interaction i;
    i.user_id = user;
    i.post_id = post_id;
    i.kind = InteractionKind::comment;
    i.timestamp = ts;
    i.sentiment = sentiment;
    return i;
}

inline bool same_page(const Page& a, const Page& b) {
    return a.id == b.id && a.name == b.name && a.engaged == b.engaged && a.community == b.community;
}

inline bool same_post(const Post& a, const Post& b) {
    return a.id == b.id && a.page_id == b.page_id && a.timestamp == b.timestamp &&
           a.text == b.text && a.sentiment == b.sentiment && a.concepts == b.concepts;
}

inline bool same_interaction(const Interaction& a, const Interaction& b) {
    return a.user_id == b.user_id && a.post_id == b.post_id && a.kind == b.kind &&
           a.timestamp == b.timestamp && a.sentiment == b.sentiment;
}

inline bool same_dataset(const InteractionDataset& a, const InteractionDataset& b) {
    if (a.pages.size() != b.pages.size() || a.posts.size() != b.posts.size() ||
        a.interactions.size() != b.interactions.size())
        return false;
    for (std::size_t i = 0; i < a.pages.size(); ++i)
        if (!same_page(a.pages[i], b.pages[i])) return false;
    for (std::size_t i = 0; i < a.posts.size(); ++i)
        if (!same_post(a.posts[i], b.posts[i])) return false;
    for (std::size_t i = 0; i < a.interactions.size(); ++i)
        if (!same_interaction(a.interactions[i], b.interactions[i])) return false;
    return true;
}

/// Random but referentially intact dataset for property tests.
inline InteractionDataset random_dataset(std::mt19937& gen, int n_pages = 6, int n_users = 20,
                                         int n_posts = 18, int n_interactions = 120) {
    std::uniform_int_distribution<int> pick_page(0, n_pages - 1);
    std::uniform_int_distribution<int> pick_post(0, n_posts - 1);
    std::uniform_int_distribution<int> pick_user(0, n_users - 1);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::bernoulli_distribution coin(0.5);

    InteractionDataset d;
    d.provenance = "random";
    for (int p = 0; p < n_pages; ++p)
        d.pages.push_back(page("pg" + std::to_string(p), coin(gen)));
    for (int p = 0; p < n_posts; ++p) {
        auto ps = post("po" + std::to_string(p), "pg" + std::to_string(pick_page(gen)),
                       1000 + 60 * p);
        if (coin(gen)) ps.sentiment = unit(gen);
        d.posts.push_back(std::move(ps));
    }
    for (int i = 0; i < n_interactions; ++i) {
        const std::string user = "u" + std::to_string(pick_user(gen));
        const std::string target = "po" + std::to_string(pick_post(gen));
        if (coin(gen)) {
            d.interactions.push_back(like(user, target, 5000 + 30 * i));
        } else {
            d.interactions.push_back(comment(user, target, 5000 + 30 * i, unit(gen)));
        }
    }
    return d;
}

/// Unique scratch directory under the system temp root.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("echograph_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testutil
