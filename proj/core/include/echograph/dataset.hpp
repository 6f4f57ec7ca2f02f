#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace echograph {

struct Page {
    std::string id;
    std::string name;
    bool engaged = false;                  // takes part in the studied debate
    std::optional<int> community;          // assigned by community detection, absent before
};

struct Post {
    std::string id;
    std::string page_id;
    std::int64_t timestamp = 0;            // UTC seconds
    std::optional<std::string> text;
    std::optional<double> sentiment;       // in [-1, 1]
    std::vector<std::string> concepts;     // pre-extracted, possibly empty
};

enum class InteractionKind { like, comment };

const char* to_string(InteractionKind k);

struct Interaction {
    std::string user_id;
    std::string post_id;
    InteractionKind kind = InteractionKind::like;
    std::int64_t timestamp = 0;            // UTC seconds
    std::optional<double> sentiment;       // comments only
};

struct InteractionDataset {
    std::vector<Page> pages;
    std::vector<Post> posts;
    std::vector<Interaction> interactions;
    std::string provenance;

    /// Checks referential integrity and field invariants; throws
    /// IntegrityError / ParseError naming the offending record.
    void validate() const;
};

struct DatasetSummary {
    std::size_t pages = 0;
    std::size_t posts = 0;
    std::size_t likes = 0;
    std::size_t comments = 0;
    std::size_t likers = 0;      // distinct liking users
    std::size_t commenters = 0;  // distinct commenting users

    bool operator==(const DatasetSummary&) const = default;
};

/// Keeps only engaged pages, their posts, and interactions on those posts.
/// Idempotent; the result is referentially intact.
InteractionDataset filter_engaged(const InteractionDataset& d);

/// Counts per category. Invariant under record reordering.
DatasetSummary summarize(const InteractionDataset& d);

} // namespace echograph
