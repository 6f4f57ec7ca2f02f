#pragma once

#include "echograph/dataset.hpp"
#include "echograph/graph.hpp"

#include <string>
#include <vector>

namespace echograph {

/// Which interaction kinds create page-user incidence.
enum class KindFilter { like, comment, both };

KindFilter parse_kind_filter(const std::string& name);

/// Page-user incidence graph. Left side: pages, right side: users, both
/// kept sorted by id. An edge records presence (multiplicity collapses)
/// plus which interaction kinds produced it.
class BipartiteGraph {
public:
    struct Edge {
        int page = 0;         // index into pages()
        int user = 0;         // index into users()
        bool via_like = false;
        bool via_comment = false;
    };

    const std::vector<std::string>& pages() const { return pages_; }
    const std::vector<std::string>& users() const { return users_; }
    const std::vector<Edge>& edges() const { return edges_; }

    int page_degree(int p) const { return page_degree_[static_cast<std::size_t>(p)]; }
    int user_degree(int u) const { return user_degree_[static_cast<std::size_t>(u)]; }

    /// Page indices incident to each user, sorted (the user's row of M^T).
    const std::vector<std::vector<int>>& pages_of_user() const { return pages_of_user_; }
    /// User indices incident to each page, sorted.
    const std::vector<std::vector<int>>& users_of_page() const { return users_of_page_; }

private:
    friend BipartiteGraph build_bipartite(const InteractionDataset&, KindFilter);
    friend BipartiteGraph make_bipartite(std::vector<std::string> pages,
                                         std::vector<std::string> users,
                                         std::vector<Edge> edges);
    std::vector<std::string> pages_;
    std::vector<std::string> users_;
    std::vector<Edge> edges_;
    std::vector<int> page_degree_;
    std::vector<int> user_degree_;
    std::vector<std::vector<int>> pages_of_user_;
    std::vector<std::vector<int>> users_of_page_;
};

/// Links user u to page p iff u has at least one selected interaction on a
/// post of p. Pages with no selected activity still appear as (isolated)
/// left nodes.
BipartiteGraph build_bipartite(const InteractionDataset& d, KindFilter kinds);

/// Assembles a bipartite graph directly from incidence pairs; ids must be
/// unique per side, edge indices in range, at most one edge per pair.
BipartiteGraph make_bipartite(std::vector<std::string> pages, std::vector<std::string> users,
                              std::vector<BipartiteGraph::Edge> edges);

enum class Side { left, right };

/// One-mode co-occurrence projection: for side == left, w(p,q) = number of
/// users active on both p and q (off-diagonal of the left co-occurrence
/// matrix); zero-weight pairs are absent. The diagonal (a node's own
/// neighbor count) is attached as node values, not as self-loops.
WeightedGraph project(const BipartiteGraph& b, Side side);

} // namespace echograph
