#include <doctest.h>

#include <echograph/bipartite.hpp>
#include <echograph/errors.hpp>

#include "helpers.hpp"

#include <cstdio>
#include <random>
#include <vector>

using namespace echograph;
using namespace testutil;

namespace {

// Dense incidence matrix oracle: projection weight between rows i and j of
// M is the (i, j) entry of M * M^T; the diagonal is a row's neighbor count.
struct DenseOracle {
    std::vector<std::vector<int>> product; // square, side count x side count

    static DenseOracle from(const BipartiteGraph& b, Side side) {
        const std::size_t n = side == Side::left ? b.pages().size() : b.users().size();
        const std::size_t m = side == Side::left ? b.users().size() : b.pages().size();
        std::vector<std::vector<int>> inc(n, std::vector<int>(m, 0));
        for (const auto& e : b.edges()) {
            const auto row = static_cast<std::size_t>(side == Side::left ? e.page : e.user);
            const auto col = static_cast<std::size_t>(side == Side::left ? e.user : e.page);
            inc[row][col] = 1;
        }
        DenseOracle o;
        o.product.assign(n, std::vector<int>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < m; ++k)
                    o.product[i][j] += inc[i][k] * inc[j][k];
        return o;
    }
};

std::string padded(const char* prefix, int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
    return buf;
}

BipartiteGraph random_bipartite(std::mt19937& gen, int max_pages = 15, int max_users = 50) {
    std::uniform_int_distribution<int> np(1, max_pages), nu(1, max_users);
    const int pages = np(gen), users = nu(gen);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double p = 0.05 + 0.4 * unit(gen);
    std::vector<std::string> page_ids, user_ids;
    for (int i = 0; i < pages; ++i) page_ids.push_back(padded("pg", i));
    for (int i = 0; i < users; ++i) user_ids.push_back(padded("u", i));
    std::vector<BipartiteGraph::Edge> edges;
    for (int i = 0; i < pages; ++i)
        for (int j = 0; j < users; ++j)
            if (unit(gen) < p) edges.push_back({i, j, true, false});
    return make_bipartite(page_ids, user_ids, edges);
}

} // namespace

TEST_SUITE("bipartite") {

TEST_CASE("incidence built from a dataset respects the kind filter") {
    InteractionDataset d;
    d.pages = {page("a"), page("b"), page("c")};
    d.posts = {post("p1", "a"), post("p2", "b")};
    d.interactions = {like("u1", "p1"), like("u1", "p1", 2100), comment("u2", "p1", 2200, 0.0),
                      like("u2", "p2"), comment("u1", "p2", 2300, 0.5)};

    const auto likes = build_bipartite(d, KindFilter::like);
    CHECK(likes.pages() == std::vector<std::string>{"a", "b", "c"});
    CHECK(likes.users() == std::vector<std::string>{"u1", "u2"});
    REQUIRE(likes.edges().size() == 2); // repeated like collapses, comments ignored
    CHECK(likes.page_degree(2) == 0);   // page c is isolated but present

    const auto comments = build_bipartite(d, KindFilter::comment);
    REQUIRE(comments.edges().size() == 2);

    const auto both = build_bipartite(d, KindFilter::both);
    REQUIRE(both.edges().size() == 4);
    int via_both = 0;
    for (const auto& e : both.edges())
        if (e.via_like && e.via_comment) ++via_both;
    CHECK(via_both == 0); // no user both liked and commented the same page here

    CHECK(parse_kind_filter("like") == KindFilter::like);
    CHECK(parse_kind_filter("comment") == KindFilter::comment);
    CHECK(parse_kind_filter("both") == KindFilter::both);
    CHECK_THROWS_AS(parse_kind_filter("share"), ParameterError);
}

TEST_CASE("edge flags record which kinds produced the link") {
    InteractionDataset d;
    d.pages = {page("a")};
    d.posts = {post("p1", "a")};
    d.interactions = {like("u1", "p1"), comment("u1", "p1", 2100, 0.0)};
    const auto b = build_bipartite(d, KindFilter::both);
    REQUIRE(b.edges().size() == 1);
    CHECK(b.edges()[0].via_like);
    CHECK(b.edges()[0].via_comment);
}

TEST_CASE("make_bipartite validates its input") {
    CHECK_THROWS_AS(make_bipartite({"a", "a"}, {"u"}, {}), IntegrityError);
    CHECK_THROWS_AS(make_bipartite({"a"}, {"u", "u"}, {}), IntegrityError);
    CHECK_THROWS_AS(make_bipartite({"a"}, {"u"}, {{1, 0, true, false}}), IntegrityError);
    CHECK_THROWS_AS(make_bipartite({"a"}, {"u"}, {{0, 0, true, false}, {0, 0, false, true}}),
                    IntegrityError);
}

TEST_CASE("projection equals the dense co-occurrence product") {
    std::mt19937 gen(1234);
    for (int round = 0; round < 25; ++round) {
        const auto b = random_bipartite(gen);
        for (const Side side : {Side::left, Side::right}) {
            const auto oracle = DenseOracle::from(b, side);
            const auto g = project(b, side);
            const auto& names = side == Side::left ? b.pages() : b.users();
            REQUIRE(static_cast<std::size_t>(g.node_count()) == names.size());
            // ids pass through sorted, so graph index == incidence row
            for (int v = 0; v < g.node_count(); ++v)
                REQUIRE(g.node_id(v) == names[static_cast<std::size_t>(v)]);

            // every emitted edge matches its matrix entry exactly
            std::vector<std::vector<int>> seen(names.size(), std::vector<int>(names.size(), 0));
            for (const auto& e : g.edges()) {
                const auto row = static_cast<std::size_t>(e.a);
                const auto col = static_cast<std::size_t>(e.b);
                CHECK(e.weight == static_cast<double>(oracle.product[row][col]));
                seen[row][col] = 1;
            }
            // and zero entries never appear as edges
            for (std::size_t i = 0; i < names.size(); ++i)
                for (std::size_t j = i + 1; j < names.size(); ++j)
                    if (!seen[i][j]) CHECK(oracle.product[i][j] == 0);

            // the co-occurrence diagonal rides along as node values
            REQUIRE(g.has_node_values());
            for (int v = 0; v < g.node_count(); ++v)
                CHECK(g.node_value(v) ==
                      static_cast<double>(oracle.product[static_cast<std::size_t>(v)]
                                                        [static_cast<std::size_t>(v)]));
        }
    }
}

TEST_CASE("projection of an empty incidence is empty") {
    const auto b = make_bipartite({}, {}, {});
    const auto g = project(b, Side::left);
    CHECK(g.node_count() == 0);
    CHECK(g.edges().empty());
}

TEST_CASE("pages with disjoint audiences project to isolated nodes") {
    const auto b = make_bipartite({"a", "b"}, {"u", "v"},
                                  {{0, 0, true, false}, {1, 1, true, false}});
    const auto g = project(b, Side::left);
    CHECK(g.node_count() == 2);
    CHECK(g.edges().empty());
    CHECK(g.node_value(0) == 1.0);
}

} // TEST_SUITE
