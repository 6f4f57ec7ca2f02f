#include "echograph/bipartite.hpp"

#include "echograph/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace echograph {

KindFilter parse_kind_filter(const std::string& name) {
    if (name == "like") return KindFilter::like;
    if (name == "comment") return KindFilter::comment;
    if (name == "both") return KindFilter::both;
    throw ParameterError("unknown interaction kind '" + name + "' (expected like, comment, both)");
}

BipartiteGraph make_bipartite(std::vector<std::string> pages, std::vector<std::string> users,
                              std::vector<BipartiteGraph::Edge> edges) {
    BipartiteGraph b;
    b.pages_ = std::move(pages);
    b.users_ = std::move(users);
    if (!std::is_sorted(b.pages_.begin(), b.pages_.end()) ||
        std::adjacent_find(b.pages_.begin(), b.pages_.end()) != b.pages_.end())
        throw IntegrityError("page ids must be sorted and unique");
    if (!std::is_sorted(b.users_.begin(), b.users_.end()) ||
        std::adjacent_find(b.users_.begin(), b.users_.end()) != b.users_.end())
        throw IntegrityError("user ids must be sorted and unique");

    std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) {
        return std::tie(x.page, x.user) < std::tie(y.page, y.user);
    });
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        if (e.page < 0 || e.page >= static_cast<int>(b.pages_.size()) || e.user < 0 ||
            e.user >= static_cast<int>(b.users_.size()))
            throw IntegrityError("bipartite edge index out of range");
        if (!seen.emplace(e.page, e.user).second)
            throw IntegrityError("duplicate bipartite edge");
    }
    b.edges_ = std::move(edges);

    b.page_degree_.assign(b.pages_.size(), 0);
    b.user_degree_.assign(b.users_.size(), 0);
    b.pages_of_user_.assign(b.users_.size(), {});
    b.users_of_page_.assign(b.pages_.size(), {});
    for (const auto& e : b.edges_) {
        ++b.page_degree_[static_cast<std::size_t>(e.page)];
        ++b.user_degree_[static_cast<std::size_t>(e.user)];
        b.pages_of_user_[static_cast<std::size_t>(e.user)].push_back(e.page);
        b.users_of_page_[static_cast<std::size_t>(e.page)].push_back(e.user);
    }
    return b;
}

BipartiteGraph build_bipartite(const InteractionDataset& d, KindFilter kinds) {
    std::vector<std::string> pages;
    pages.reserve(d.pages.size());
    for (const auto& p : d.pages) pages.push_back(p.id);
    std::sort(pages.begin(), pages.end());

    std::unordered_map<std::string, int> page_index;
    for (std::size_t i = 0; i < pages.size(); ++i) page_index[pages[i]] = static_cast<int>(i);
    std::unordered_map<std::string, int> post_page;
    for (const auto& p : d.posts) {
        const auto it = page_index.find(p.page_id);
        if (it == page_index.end())
            throw IntegrityError("post '" + p.id + "' references unknown page");
        post_page[p.id] = it->second;
    }

    const bool want_like = kinds != KindFilter::comment;
    const bool want_comment = kinds != KindFilter::like;

    // (user id, page index) -> kind mask; map keeps users sorted.
    std::map<std::string, std::map<int, std::pair<bool, bool>>> incidence;
    for (const auto& i : d.interactions) {
        const bool is_like = i.kind == InteractionKind::like;
        if (is_like && !want_like) continue;
        if (!is_like && !want_comment) continue;
        const auto it = post_page.find(i.post_id);
        if (it == post_page.end())
            throw IntegrityError("interaction references unknown post '" + i.post_id + "'");
        auto& mask = incidence[i.user_id][it->second];
        if (is_like) mask.first = true;
        else mask.second = true;
    }

    std::vector<std::string> users;
    users.reserve(incidence.size());
    std::vector<BipartiteGraph::Edge> edges;
    for (const auto& [user_id, pages_hit] : incidence) {
        const int u = static_cast<int>(users.size());
        users.push_back(user_id);
        for (const auto& [p, mask] : pages_hit)
            edges.push_back({p, u, mask.first, mask.second});
    }
    return make_bipartite(std::move(pages), std::move(users), std::move(edges));
}

WeightedGraph project(const BipartiteGraph& b, Side side) {
    // Emit all pairs in each opposite-side node's neighborhood and
    // aggregate; neighbor lists are small relative to the node sets, so
    // this costs O(sum of squared degrees) instead of a dense product.
    const auto& groups = side == Side::left ? b.pages_of_user() : b.users_of_page();
    const auto& ids = side == Side::left ? b.pages() : b.users();
    const int n = static_cast<int>(ids.size());

    std::map<std::pair<int, int>, double> weights;
    std::vector<double> diagonal(static_cast<std::size_t>(n), 0.0);
    for (const auto& members : groups) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            diagonal[static_cast<std::size_t>(members[i])] += 1.0;
            for (std::size_t j = i + 1; j < members.size(); ++j)
                weights[{members[i], members[j]}] += 1.0;
        }
    }

    std::vector<WeightedEdge> edges;
    edges.reserve(weights.size());
    for (const auto& [pair, w] : weights) edges.push_back({pair.first, pair.second, w});
    return make_graph_from_sorted(ids, std::move(edges), std::move(diagonal));
}

} // namespace echograph
