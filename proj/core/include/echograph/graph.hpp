#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace echograph {

struct WeightedEdge {
    int a = 0; // node index, a < b
    int b = 0;
    double weight = 0.0;

    bool operator==(const WeightedEdge&) const = default;
};

/// Undirected weighted graph, loop-free, positive weights. Nodes are
/// addressed by dense indices; ids are kept sorted so identical edge sets
/// yield identical graphs regardless of construction order.
class WeightedGraph {
public:
    WeightedGraph() = default;

    /// `ids` need not be sorted; they are canonicalized. Edge endpoints are
    /// ids. Throws on self-loops, non-positive weights, duplicate pairs, or
    /// endpoints missing from `ids`.
    static WeightedGraph from_edges(std::vector<std::string> ids,
                                    const std::vector<std::tuple<std::string, std::string, double>>& edges);

    int node_count() const { return static_cast<int>(ids_.size()); }
    const std::string& node_id(int i) const { return ids_[static_cast<std::size_t>(i)]; }
    const std::vector<std::string>& node_ids() const { return ids_; }
    /// Index of an id, or -1 when absent.
    int index_of(const std::string& id) const;

    const std::vector<WeightedEdge>& edges() const { return edges_; }
    double strength(int i) const { return strength_[static_cast<std::size_t>(i)]; }
    int degree(int i) const { return static_cast<int>(adj_[static_cast<std::size_t>(i)].size()); }
    /// Neighbors of i as (node index, edge weight), sorted by index.
    const std::vector<std::pair<int, double>>& neighbors(int i) const {
        return adj_[static_cast<std::size_t>(i)];
    }
    /// Sum of all edge weights (each undirected edge once).
    double total_weight() const { return total_weight_; }

    /// Optional per-node scalar attached by a producer (the projection
    /// stores the co-occurrence diagonal, i.e. a page's audience size).
    bool has_node_values() const { return !node_values_.empty(); }
    double node_value(int i) const { return node_values_[static_cast<std::size_t>(i)]; }
    void set_node_values(std::vector<double> values);

    /// Same nodes, every weight multiplied by c > 0.
    WeightedGraph scaled(double c) const;

    bool operator==(const WeightedGraph&) const = default;

private:
    friend WeightedGraph make_graph_from_sorted(std::vector<std::string> sorted_ids,
                                                std::vector<WeightedEdge> edges,
                                                std::vector<double> node_values);
    void build_adjacency();

    std::vector<std::string> ids_;               // sorted
    std::vector<WeightedEdge> edges_;            // a < b, ordered by (a, b)
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::vector<double> strength_;
    std::vector<double> node_values_;
    double total_weight_ = 0.0;
};

/// Internal fast path for producers that already hold sorted ids and
/// canonical index edges.
WeightedGraph make_graph_from_sorted(std::vector<std::string> sorted_ids,
                                     std::vector<WeightedEdge> edges,
                                     std::vector<double> node_values = {});

/// Edge-list CSV: node_a,node_b,weight (header mandatory).
WeightedGraph read_graph_csv(const std::filesystem::path& path);
void write_graph_csv(const WeightedGraph& g, std::ostream& out);
void write_graph_csv_file(const WeightedGraph& g, const std::filesystem::path& path);

} // namespace echograph
