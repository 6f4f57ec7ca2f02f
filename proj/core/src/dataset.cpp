#include "echograph/dataset.hpp"

#include "echograph/errors.hpp"

#include <unordered_map>
#include <unordered_set>

namespace echograph {

const char* to_string(InteractionKind k) {
    return k == InteractionKind::like ? "like" : "comment";
}

void InteractionDataset::validate() const {
    std::unordered_set<std::string> page_ids;
    page_ids.reserve(pages.size());
    for (const auto& p : pages) {
        if (!page_ids.insert(p.id).second)
            throw IntegrityError("duplicate page id '" + p.id + "'");
    }
    std::unordered_set<std::string> post_ids;
    post_ids.reserve(posts.size());
    for (const auto& p : posts) {
        if (!post_ids.insert(p.id).second)
            throw IntegrityError("duplicate post id '" + p.id + "'");
        if (!page_ids.count(p.page_id))
            throw IntegrityError("post '" + p.id + "' references unknown page '" + p.page_id + "'");
        if (p.sentiment && (*p.sentiment < -1.0 || *p.sentiment > 1.0))
            throw ParseError("post '" + p.id + "' sentiment outside [-1,1]");
    }
    for (const auto& i : interactions) {
        if (!post_ids.count(i.post_id))
            throw IntegrityError("interaction by '" + i.user_id + "' references unknown post '" +
                                 i.post_id + "'");
        if (i.kind == InteractionKind::like && i.sentiment)
            throw ParseError("like by '" + i.user_id + "' on '" + i.post_id +
                             "' carries a sentiment score");
        if (i.sentiment && (*i.sentiment < -1.0 || *i.sentiment > 1.0))
            throw ParseError("comment by '" + i.user_id + "' on '" + i.post_id +
                             "' sentiment outside [-1,1]");
    }
}

InteractionDataset filter_engaged(const InteractionDataset& d) {
    InteractionDataset out;
    out.provenance = d.provenance;
    std::unordered_set<std::string> kept_pages;
    for (const auto& p : d.pages) {
        if (p.engaged) {
            out.pages.push_back(p);
            kept_pages.insert(p.id);
        }
    }
    std::unordered_set<std::string> kept_posts;
    for (const auto& p : d.posts) {
        if (kept_pages.count(p.page_id)) {
            out.posts.push_back(p);
            kept_posts.insert(p.id);
        }
    }
    for (const auto& i : d.interactions) {
        if (kept_posts.count(i.post_id)) out.interactions.push_back(i);
    }
    return out;
}

DatasetSummary summarize(const InteractionDataset& d) {
    DatasetSummary s;
    s.pages = d.pages.size();
    s.posts = d.posts.size();
    std::unordered_set<std::string> likers, commenters;
    for (const auto& i : d.interactions) {
        if (i.kind == InteractionKind::like) {
            ++s.likes;
            likers.insert(i.user_id);
        } else {
            ++s.comments;
            commenters.insert(i.user_id);
        }
    }
    s.likers = likers.size();
    s.commenters = commenters.size();
    return s;
}

} // namespace echograph
