#include "echograph/graph.hpp"

#include "echograph/csv.hpp"
#include "echograph/errors.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace echograph {

void WeightedGraph::build_adjacency() {
    const std::size_t n = ids_.size();
    adj_.assign(n, {});
    strength_.assign(n, 0.0);
    total_weight_ = 0.0;
    std::sort(edges_.begin(), edges_.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    for (const auto& e : edges_) {
        adj_[static_cast<std::size_t>(e.a)].emplace_back(e.b, e.weight);
        adj_[static_cast<std::size_t>(e.b)].emplace_back(e.a, e.weight);
        strength_[static_cast<std::size_t>(e.a)] += e.weight;
        strength_[static_cast<std::size_t>(e.b)] += e.weight;
        total_weight_ += e.weight;
    }
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

WeightedGraph make_graph_from_sorted(std::vector<std::string> sorted_ids,
                                     std::vector<WeightedEdge> edges,
                                     std::vector<double> node_values) {
    WeightedGraph g;
    g.ids_ = std::move(sorted_ids);
    g.edges_ = std::move(edges);
    g.node_values_ = std::move(node_values);
    g.build_adjacency();
    return g;
}

WeightedGraph WeightedGraph::from_edges(
    std::vector<std::string> ids,
    const std::vector<std::tuple<std::string, std::string, double>>& edges) {
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw IntegrityError("duplicate node id in graph");
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<int>(i);

    std::vector<WeightedEdge> canonical;
    canonical.reserve(edges.size());
    std::set<std::pair<int, int>> seen;
    for (const auto& [ida, idb, w] : edges) {
        const auto ita = index.find(ida);
        const auto itb = index.find(idb);
        if (ita == index.end() || itb == index.end())
            throw IntegrityError("edge endpoint not in node set: " + ida + "," + idb);
        if (ita->second == itb->second)
            throw ParameterError("self-loop on node '" + ida + "'");
        if (w <= 0.0)
            throw ParameterError("non-positive weight on edge " + ida + "," + idb);
        const int a = std::min(ita->second, itb->second);
        const int b = std::max(ita->second, itb->second);
        if (!seen.emplace(a, b).second)
            throw ParameterError("duplicate edge " + ida + "," + idb);
        canonical.push_back({a, b, w});
    }
    return make_graph_from_sorted(std::move(ids), std::move(canonical));
}

int WeightedGraph::index_of(const std::string& id) const {
    const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return -1;
    return static_cast<int>(it - ids_.begin());
}

void WeightedGraph::set_node_values(std::vector<double> values) {
    if (values.size() != ids_.size())
        throw ContractError("node value count does not match node count");
    node_values_ = std::move(values);
}

WeightedGraph WeightedGraph::scaled(double c) const {
    if (c <= 0.0) throw ParameterError("scale factor must be positive");
    auto edges = edges_;
    for (auto& e : edges) e.weight *= c;
    auto g = make_graph_from_sorted(ids_, std::move(edges), node_values_);
    return g;
}

WeightedGraph read_graph_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::size_t line_no = 0;
    std::vector<std::string> fields;
    if (!csv_read_record(in, fields, line_no))
        throw ParseError(path.string() + ": empty file, header row is mandatory");
    if (fields.size() < 3 || fields[0] != "node_a" || fields[1] != "node_b" ||
        fields[2] != "weight")
        throw ParseError(path.string() + ": expected header node_a,node_b,weight");

    std::set<std::string> ids;
    std::vector<std::tuple<std::string, std::string, double>> edges;
    while (csv_read_record(in, fields, line_no)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() < 3)
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": wrong field count");
        double w = 0.0;
        try {
            w = std::stod(fields[2]);
        } catch (const std::exception&) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad weight '" +
                             fields[2] + "'");
        }
        ids.insert(fields[0]);
        ids.insert(fields[1]);
        edges.emplace_back(fields[0], fields[1], w);
    }
    return WeightedGraph::from_edges({ids.begin(), ids.end()}, edges);
}

void write_graph_csv(const WeightedGraph& g, std::ostream& out) {
    csv_write_record(out, {"node_a", "node_b", "weight"});
    for (const auto& e : g.edges())
        csv_write_record(out, {g.node_id(e.a), g.node_id(e.b), format_double(e.weight)});
}

void write_graph_csv_file(const WeightedGraph& g, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    write_graph_csv(g, out);
}

} // namespace echograph
