#include <doctest.h>

#include <echograph/community.hpp>
#include <echograph/errors.hpp>
#include <echograph/rng.hpp>

#include "helpers.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <tuple>
#include <vector>

using namespace echograph;
namespace fs = std::filesystem;

namespace {

WeightedGraph two_triangles_bridge() {
    return WeightedGraph::from_edges(
        {"a", "b", "c", "d", "e", "f"},
        {{"a", "b", 1.0}, {"b", "c", 1.0}, {"a", "c", 1.0},
         {"d", "e", 1.0}, {"e", "f", 1.0}, {"d", "f", 1.0},
         {"c", "d", 1.0}});
}

Partition partition_of(const WeightedGraph& g, const std::vector<int>& labels) {
    return make_partition(g.node_ids(), labels, CommunityAlgorithm::external);
}

// O(n^2) definition: Q = (1/2m) sum_ij (A_ij - s_i s_j / 2m) [c_i = c_j],
// diagonal terms included (A_ii = 0 but the null model still contributes).
double modularity_oracle(const WeightedGraph& g, const std::vector<int>& labels) {
    const int n = g.node_count();
    const double two_m = 2.0 * g.total_weight();
    if (two_m == 0.0) return 0.0;
    std::vector<std::vector<double>> a(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (const auto& e : g.edges()) {
        a[static_cast<std::size_t>(e.a)][static_cast<std::size_t>(e.b)] = e.weight;
        a[static_cast<std::size_t>(e.b)][static_cast<std::size_t>(e.a)] = e.weight;
    }
    double q = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (labels[static_cast<std::size_t>(i)] != labels[static_cast<std::size_t>(j)])
                continue;
            q += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                 g.strength(i) * g.strength(j) / two_m;
        }
    return q / two_m;
}

WeightedGraph random_graph(std::mt19937& gen, int n, double density) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "n%02d", i);
        ids.push_back(buf);
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::tuple<std::string, std::string, double>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (unit(gen) < density)
                edges.emplace_back(ids[static_cast<std::size_t>(i)],
                                   ids[static_cast<std::size_t>(j)], 0.25 + 4.0 * unit(gen));
    return WeightedGraph::from_edges(ids, edges);
}

// Two planted 6-cliques with strong internal weights and one weak tie.
WeightedGraph planted_two_blocks() {
    std::vector<std::string> ids;
    for (int i = 0; i < 12; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "v%02d", i);
        ids.push_back(buf);
    }
    std::vector<std::tuple<std::string, std::string, double>> edges;
    for (int block = 0; block < 2; ++block)
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j)
                edges.emplace_back(ids[static_cast<std::size_t>(block * 6 + i)],
                                   ids[static_cast<std::size_t>(block * 6 + j)], 5.0);
    edges.emplace_back(ids[0], ids[6], 0.5);
    return WeightedGraph::from_edges(ids, edges);
}

std::vector<int> planted_labels() {
    std::vector<int> labels(12, 0);
    for (int i = 6; i < 12; ++i) labels[static_cast<std::size_t>(i)] = 1;
    return labels;
}

// Enumerates every set partition of n items as restricted growth strings.
std::vector<std::vector<int>> all_partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    while (true) {
        out.push_back(rgs);
        int i = n - 1;
        for (; i > 0; --i) {
            int cap = 0;
            for (int j = 0; j < i; ++j) cap = std::max(cap, rgs[static_cast<std::size_t>(j)]);
            if (rgs[static_cast<std::size_t>(i)] <= cap) break;
        }
        if (i == 0) return out;
        ++rgs[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) rgs[static_cast<std::size_t>(j)] = 0;
    }
}

// Pair-counting oracle over all unordered node pairs.
PartitionComparison pairwise_oracle(const std::vector<int>& x, const std::vector<int>& y) {
    const std::size_t n = x.size();
    PairCounts pc;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool in_x = x[i] == x[j];
            const bool in_y = y[i] == y[j];
            if (in_x && in_y) ++pc.both_together;
            else if (in_x) ++pc.first_only;
            else if (in_y) ++pc.second_only;
            else ++pc.both_apart;
        }
    const double total =
        static_cast<double>(pc.both_together + pc.both_apart + pc.first_only + pc.second_only);
    PartitionComparison c;
    c.pair_counts = pc;
    c.rand_index =
        total == 0.0 ? 1.0 : static_cast<double>(pc.both_together + pc.both_apart) / total;
    return c;
}

} // namespace

TEST_SUITE("community") {

TEST_CASE("two triangles joined by a bridge score five fourteenths") {
    const auto g = two_triangles_bridge();
    const auto p = partition_of(g, {0, 0, 0, 1, 1, 1});
    CHECK(std::abs(modularity(g, p) - 5.0 / 14.0) < 1e-12);
}

TEST_CASE("modularity agrees with the quadratic-sum definition") {
    std::mt19937 gen(41);
    std::uniform_int_distribution<int> n_nodes(2, 12), n_comms(1, 4);
    for (int round = 0; round < 20; ++round) {
        const auto g = random_graph(gen, n_nodes(gen), 0.5);
        std::vector<int> labels(static_cast<std::size_t>(g.node_count()));
        std::uniform_int_distribution<int> lab(0, n_comms(gen) - 1);
        for (auto& l : labels) l = lab(gen);
        const auto p = partition_of(g, labels);
        CHECK(std::abs(modularity(g, p) - modularity_oracle(g, labels)) < 1e-10);
    }
}

TEST_CASE("edgeless graphs have zero modularity") {
    const auto g = WeightedGraph::from_edges({"a", "b", "c"}, {});
    CHECK(modularity(g, partition_of(g, {0, 1, 2})) == 0.0);
    CHECK(modularity(g, partition_of(g, {0, 0, 0})) == 0.0);
}

TEST_CASE("modularity rejects a partition over different nodes") {
    const auto g = two_triangles_bridge();
    const auto other = WeightedGraph::from_edges({"x", "y"}, {{"x", "y", 1.0}});
    const auto p = partition_of(other, {0, 1});
    CHECK_THROWS_AS(modularity(g, p), ContractError);
}

TEST_CASE("greedy merging recovers the two triangles") {
    const auto g = two_triangles_bridge();
    const auto p = fast_greedy(g);
    CHECK(p.algorithm == CommunityAlgorithm::fast_greedy);
    CHECK(p.community_count() == 2);
    CHECK(std::abs(p.modularity - 5.0 / 14.0) < 1e-12);
    CHECK(p.community_of("a") == p.community_of("b"));
    CHECK(p.community_of("a") == p.community_of("c"));
    CHECK(p.community_of("d") == p.community_of("e"));
    CHECK(p.community_of("a") != p.community_of("d"));
    CHECK(p.converged);
}

TEST_CASE("greedy result never beats the exhaustive optimum on small graphs") {
    std::mt19937 gen(43);
    const auto partitions = all_partitions(6);
    CHECK(partitions.size() == 203); // Bell number of 6
    for (int round = 0; round < 10; ++round) {
        const auto g = random_graph(gen, 6, 0.6);
        double best = 0.0;
        for (const auto& labels : partitions)
            best = std::max(best, modularity_oracle(g, labels));
        const auto p = fast_greedy(g);
        CHECK(p.modularity <= best + 1e-12);
    }
}

TEST_CASE("disconnected components stay separate under greedy merging") {
    const auto g = WeightedGraph::from_edges(
        {"a", "b", "c", "d"}, {{"a", "b", 1.0}, {"c", "d", 1.0}});
    const auto p = fast_greedy(g);
    CHECK(p.community_count() == 2);
    CHECK(p.community_of("a") == p.community_of("b"));
    CHECK(p.community_of("a") != p.community_of("c"));
}

TEST_CASE("single-edge graph merges its endpoints") {
    const auto g = WeightedGraph::from_edges({"a", "b"}, {{"a", "b", 3.0}});
    const auto p = fast_greedy(g);
    CHECK(p.community_count() == 1);
    CHECK(p.modularity == doctest::Approx(0.0));
}

TEST_CASE("walktrap recovers the triangles and honors its step contract") {
    const auto g = two_triangles_bridge();
    const auto p = walktrap(g);
    CHECK(p.algorithm == CommunityAlgorithm::walktrap);
    CHECK(p.community_count() == 2);
    CHECK(p.community_of("a") == p.community_of("c"));
    CHECK(p.community_of("d") == p.community_of("f"));
    CHECK_THROWS_AS(walktrap(g, 0), ParameterError);
    CHECK_THROWS_AS(walktrap(g, -3), ParameterError);
    CHECK_NOTHROW(walktrap(g, 2));
}

TEST_CASE("walktrap leaves isolated nodes alone") {
    const auto g = WeightedGraph::from_edges({"a", "b", "iso"}, {{"a", "b", 1.0}});
    const auto p = walktrap(g);
    const int iso = p.community_of("iso");
    CHECK(iso != p.community_of("a"));
    CHECK(iso != p.community_of("b"));
}

TEST_CASE("multilevel recovers planted blocks deterministically") {
    const auto g = planted_two_blocks();
    const auto p1 = multilevel(g, 7);
    const auto p2 = multilevel(g, 7);
    CHECK(p1.algorithm == CommunityAlgorithm::multilevel);
    CHECK(p1.community == p2.community);
    CHECK(p1.seed == 7);
    CHECK(p1.community_count() == 2);
    const auto truth = partition_of(g, planted_labels());
    CHECK(compare_partitions(p1, truth).adjusted_rand == 1.0);
}

TEST_CASE("label propagation recovers planted blocks deterministically") {
    const auto g = planted_two_blocks();
    const auto p1 = label_propagation(g, 7);
    const auto p2 = label_propagation(g, 7);
    CHECK(p1.algorithm == CommunityAlgorithm::label_propagation);
    CHECK(p1.community == p2.community);
    CHECK(p1.converged);
    const auto truth = partition_of(g, planted_labels());
    CHECK(compare_partitions(p1, truth).adjusted_rand == 1.0);
}

TEST_CASE("label propagation keeps isolated nodes in their own label") {
    const auto g = WeightedGraph::from_edges({"a", "b", "iso"}, {{"a", "b", 2.0}});
    const auto p = label_propagation(g, 3);
    CHECK(p.community_of("iso") != p.community_of("a"));
}

TEST_CASE("all four algorithms agree on the planted blocks") {
    const auto g = planted_two_blocks();
    const auto truth = partition_of(g, planted_labels());
    for (const auto& p : {fast_greedy(g), walktrap(g), multilevel(g, 42),
                          label_propagation(g, 42)}) {
        const auto c = compare_partitions(p, truth);
        CHECK(c.adjusted_rand == 1.0);
        CHECK(c.rand_index == 1.0);
    }
}

TEST_CASE("algorithms handle trivial graphs") {
    const auto empty = WeightedGraph::from_edges({}, {});
    CHECK(fast_greedy(empty).community_count() == 0);
    CHECK(walktrap(empty).community_count() == 0);
    CHECK(multilevel(empty, 1).community_count() == 0);
    CHECK(label_propagation(empty, 1).community_count() == 0);

    const auto lone = WeightedGraph::from_edges({"a"}, {});
    CHECK(fast_greedy(lone).community_count() == 1);
    CHECK(walktrap(lone).community_count() == 1);
    CHECK(multilevel(lone, 1).community_count() == 1);
    CHECK(label_propagation(lone, 1).community_count() == 1);
}

TEST_CASE("rand indices on the textbook pair") {
    // {1,2},{3,4} vs {1,2,3},{4}: agreeing pairs are (1,2) and none of the
    // split ones; 3 of 6 pairs agree in total.
    const std::vector<std::string> ids{"1", "2", "3", "4"};
    const auto a = make_partition(ids, {0, 0, 1, 1}, CommunityAlgorithm::external);
    const auto b = make_partition(ids, {0, 0, 0, 1}, CommunityAlgorithm::external);
    const auto c = compare_partitions(a, b);
    CHECK(c.rand_index == 0.5);
    CHECK(c.pair_counts.both_together == 1);
    CHECK(c.pair_counts.first_only == 1);
    CHECK(c.pair_counts.second_only == 2);
    CHECK(c.pair_counts.both_apart == 2);
}

TEST_CASE("identical partitions compare as perfect agreement") {
    const std::vector<std::string> ids{"1", "2", "3", "4", "5"};
    const auto a = make_partition(ids, {0, 0, 1, 2, 2}, CommunityAlgorithm::external);
    const auto c = compare_partitions(a, a);
    CHECK(c.rand_index == 1.0);
    CHECK(c.adjusted_rand == 1.0);
}

TEST_CASE("comparison agrees with the pairwise-count oracle") {
    std::mt19937 gen(47);
    std::uniform_int_distribution<int> n_nodes(2, 12), n_comms(1, 5);
    for (int round = 0; round < 20; ++round) {
        const int n = n_nodes(gen);
        std::vector<std::string> ids;
        for (int i = 0; i < n; ++i) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "x%02d", i);
            ids.push_back(buf);
        }
        std::vector<int> lx(static_cast<std::size_t>(n)), ly(static_cast<std::size_t>(n));
        std::uniform_int_distribution<int> cx(0, n_comms(gen) - 1), cy(0, n_comms(gen) - 1);
        for (auto& l : lx) l = cx(gen);
        for (auto& l : ly) l = cy(gen);
        const auto pa = make_partition(ids, lx, CommunityAlgorithm::external);
        const auto pb = make_partition(ids, ly, CommunityAlgorithm::external);
        const auto got = compare_partitions(pa, pb);
        const auto want = pairwise_oracle(lx, ly);
        CHECK(got.pair_counts.both_together == want.pair_counts.both_together);
        CHECK(got.pair_counts.first_only == want.pair_counts.first_only);
        CHECK(got.pair_counts.second_only == want.pair_counts.second_only);
        CHECK(got.pair_counts.both_apart == want.pair_counts.both_apart);
        CHECK(got.rand_index == doctest::Approx(want.rand_index).epsilon(1e-15));
        CHECK(got.adjusted_rand <= 1.0 + 1e-12);
    }
}

TEST_CASE("comparison requires identical node sets") {
    const auto a = make_partition({"1", "2"}, {0, 1}, CommunityAlgorithm::external);
    const auto b = make_partition({"1", "3"}, {0, 1}, CommunityAlgorithm::external);
    CHECK_THROWS_AS(compare_partitions(a, b), ContractError);
}

TEST_CASE("partitions canonicalize labels by first appearance") {
    const auto p = make_partition({"a", "b", "c", "d"}, {7, 3, 7, 9},
                                  CommunityAlgorithm::external);
    CHECK(p.community == std::vector<int>{0, 1, 0, 2});
    CHECK(p.community_count() == 3);
    CHECK(p.community_of("c") == 0);
    CHECK_THROWS_AS(p.community_of("zz"), ContractError);
    CHECK_THROWS_AS(make_partition({"a", "a"}, {0, 0}, CommunityAlgorithm::external),
                    IntegrityError);
    CHECK_THROWS_AS(make_partition({"a", "b"}, {0}, CommunityAlgorithm::external),
                    ContractError);
}

TEST_CASE("partition csv round-trips") {
    const auto dir = testutil::scratch_dir("partcsv");
    const auto p = make_partition({"a", "b", "c"}, {0, 1, 0}, CommunityAlgorithm::external);
    write_partition_csv_file(p, dir / "p.csv");
    const auto back = read_partition_csv(dir / "p.csv");
    CHECK(back.node_ids == p.node_ids);
    CHECK(back.community == p.community);

    // writer creates missing parent directories
    write_partition_csv_file(p, dir / "nested" / "p.csv");
    CHECK(read_partition_csv(dir / "nested" / "p.csv").community == p.community);

    std::ofstream bad(dir / "dup.csv");
    bad << "node,community\na,0\na,1\n";
    bad.close();
    CHECK_THROWS_AS(read_partition_csv(dir / "dup.csv"), ParseError);
    std::ofstream nohdr(dir / "nohdr.csv");
    nohdr << "a,0\n";
    nohdr.close();
    CHECK_THROWS_AS(read_partition_csv(dir / "nohdr.csv"), ParseError);
    fs::remove_all(dir);
}

TEST_CASE("algorithm names print") {
    CHECK(std::string(to_string(CommunityAlgorithm::fast_greedy)) == "fast_greedy");
    CHECK(std::string(to_string(CommunityAlgorithm::walktrap)) == "walktrap");
    CHECK(std::string(to_string(CommunityAlgorithm::multilevel)) == "multilevel");
    CHECK(std::string(to_string(CommunityAlgorithm::label_propagation)) == "label_propagation");
    CHECK(std::string(to_string(CommunityAlgorithm::external)) == "external");
}

} // TEST_SUITE
