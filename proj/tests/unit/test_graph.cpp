#include <doctest.h>

#include <echograph/errors.hpp>
#include <echograph/graph.hpp>

#include "helpers.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <tuple>

using namespace echograph;
namespace fs = std::filesystem;

namespace {

using EdgeSpec = std::vector<std::tuple<std::string, std::string, double>>;

WeightedGraph triangle_plus_tail() {
    return WeightedGraph::from_edges({"a", "b", "c", "d"},
                                     {{"a", "b", 1.0}, {"b", "c", 2.0}, {"a", "c", 3.0},
                                      {"c", "d", 0.5}});
}

} // namespace

TEST_SUITE("graph") {

TEST_CASE("construction canonicalizes ids and edge order") {
    const EdgeSpec edges{{"b", "a", 1.5}, {"c", "a", 2.5}};
    const auto g1 = WeightedGraph::from_edges({"c", "a", "b"}, edges);
    const auto g2 = WeightedGraph::from_edges({"a", "b", "c"},
                                              {{"a", "c", 2.5}, {"a", "b", 1.5}});
    CHECK(g1 == g2);
    CHECK(g1.node_ids() == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(g1.edges().size() == 2);
    CHECK(g1.edges()[0].a < g1.edges()[0].b);
}

TEST_CASE("degenerate inputs are refused") {
    CHECK_THROWS_AS(WeightedGraph::from_edges({"a"}, {{"a", "a", 1.0}}), ParameterError);
    CHECK_THROWS_AS(WeightedGraph::from_edges({"a", "b"}, {{"a", "b", 0.0}}), ParameterError);
    CHECK_THROWS_AS(WeightedGraph::from_edges({"a", "b"}, {{"a", "b", -1.0}}), ParameterError);
    CHECK_THROWS_AS(WeightedGraph::from_edges({"a", "b"}, {{"a", "b", 1.0}, {"b", "a", 2.0}}),
                    ParameterError);
    CHECK_THROWS_AS(WeightedGraph::from_edges({"a"}, {{"a", "zz", 1.0}}), IntegrityError);
    CHECK_THROWS_AS(WeightedGraph::from_edges({"a", "a"}, {}), IntegrityError);
}

TEST_CASE("strength, degree, and totals") {
    const auto g = triangle_plus_tail();
    const int a = g.index_of("a"), c = g.index_of("c"), d = g.index_of("d");
    CHECK(g.strength(a) == doctest::Approx(4.0));
    CHECK(g.strength(c) == doctest::Approx(5.5));
    CHECK(g.strength(d) == doctest::Approx(0.5));
    CHECK(g.degree(a) == 2);
    CHECK(g.degree(c) == 3);
    CHECK(g.total_weight() == doctest::Approx(6.5));
    CHECK(g.index_of("zz") == -1);

    double strength_sum = 0.0;
    for (int i = 0; i < g.node_count(); ++i) strength_sum += g.strength(i);
    CHECK(strength_sum == doctest::Approx(2.0 * g.total_weight()));
}

TEST_CASE("neighbors are sorted by index") {
    const auto g = triangle_plus_tail();
    const auto& nc = g.neighbors(g.index_of("c"));
    REQUIRE(nc.size() == 3);
    CHECK(std::is_sorted(nc.begin(), nc.end(),
                         [](const auto& x, const auto& y) { return x.first < y.first; }));
}

TEST_CASE("node values are optional and size-checked") {
    auto g = triangle_plus_tail();
    CHECK_FALSE(g.has_node_values());
    CHECK_THROWS_AS(g.set_node_values({1.0, 2.0}), ContractError);
    g.set_node_values({1.0, 2.0, 3.0, 4.0});
    CHECK(g.has_node_values());
    CHECK(g.node_value(g.index_of("d")) == 4.0);
}

TEST_CASE("scaled multiplies weights and keeps structure") {
    auto g = triangle_plus_tail();
    g.set_node_values({1.0, 2.0, 3.0, 4.0});
    const auto s = g.scaled(2.5);
    CHECK(s.node_ids() == g.node_ids());
    REQUIRE(s.edges().size() == g.edges().size());
    for (std::size_t i = 0; i < s.edges().size(); ++i)
        CHECK(s.edges()[i].weight == doctest::Approx(2.5 * g.edges()[i].weight));
    CHECK(s.node_value(0) == g.node_value(0));
    CHECK_THROWS_AS(g.scaled(0.0), ParameterError);
    CHECK_THROWS_AS(g.scaled(-1.0), ParameterError);
}

TEST_CASE("csv round-trip preserves the edge list") {
    const auto g = triangle_plus_tail();
    const auto dir = testutil::scratch_dir("graphcsv");
    write_graph_csv_file(g, dir / "g.csv");
    const auto back = read_graph_csv(dir / "g.csv");
    CHECK(back == g);

    // writer creates missing parent directories
    write_graph_csv_file(g, dir / "nested" / "deeper" / "g.csv");
    CHECK(read_graph_csv(dir / "nested" / "deeper" / "g.csv") == g);
    fs::remove_all(dir);
}

TEST_CASE("csv reader rejects malformed input") {
    const auto dir = testutil::scratch_dir("graphbad");
    auto write = [&](const char* name, const char* text) {
        std::ofstream out(dir / name);
        out << text;
    };
    write("empty.csv", "");
    write("header.csv", "a,b,c\n");
    write("fields.csv", "node_a,node_b,weight\nx,y\n");
    write("weight.csv", "node_a,node_b,weight\nx,y,heavy\n");
    CHECK_THROWS_AS(read_graph_csv(dir / "empty.csv"), ParseError);
    CHECK_THROWS_AS(read_graph_csv(dir / "header.csv"), ParseError);
    CHECK_THROWS_AS(read_graph_csv(dir / "fields.csv"), ParseError);
    CHECK_THROWS_AS(read_graph_csv(dir / "weight.csv"), ParseError);
    CHECK_THROWS_AS(read_graph_csv(dir / "missing.csv"), ParseError);
    fs::remove_all(dir);
}

TEST_CASE("random graphs rebuild identically from shuffled edges") {
    std::mt19937 gen(31);
    for (int round = 0; round < 10; ++round) {
        const int n = 8;
        std::vector<std::string> ids;
        for (int i = 0; i < n; ++i) ids.push_back("n" + std::to_string(i));
        EdgeSpec edges;
        std::uniform_real_distribution<double> w(0.1, 5.0);
        std::bernoulli_distribution coin(0.4);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (coin(gen)) edges.emplace_back(ids[static_cast<std::size_t>(i)],
                                                  ids[static_cast<std::size_t>(j)], w(gen));
        auto shuffled = edges;
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        for (auto& e : shuffled)
            if (gen() % 2) std::swap(std::get<0>(e), std::get<1>(e));
        auto shuffled_ids = ids;
        std::shuffle(shuffled_ids.begin(), shuffled_ids.end(), gen);
        CHECK(WeightedGraph::from_edges(ids, edges) ==
              WeightedGraph::from_edges(shuffled_ids, shuffled));
    }
}

} // TEST_SUITE
