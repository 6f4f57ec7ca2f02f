#include "echograph/backbone.hpp"

#include "echograph/errors.hpp"

#include <algorithm>
#include <cmath>

namespace echograph {

BackboneRule parse_backbone_rule(const std::string& name) {
    if (name == "any") return BackboneRule::any;
    if (name == "both") return BackboneRule::both;
    throw ParameterError("unknown backbone rule '" + name + "' (expected any or both)");
}

double disparity_pvalue(double normalized_weight, int degree) {
    if (degree < 1) throw ParameterError("degree must be >= 1");
    if (normalized_weight < 0.0 || normalized_weight > 1.0)
        throw ParameterError("normalized weight must lie in [0,1]");
    if (degree == 1) return 1.0;
    // p-value of w/s under the uniform-split null: (1-p)^(k-1).
    return std::pow(1.0 - normalized_weight, degree - 1);
}

BackboneResult disparity_filter(const WeightedGraph& g, double alpha, BackboneRule rule) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ParameterError("alpha must lie strictly inside (0,1)");

    BackboneResult result;
    result.alpha = alpha;
    result.rule = rule;
    result.per_edge_alpha.reserve(g.edges().size());
    result.kept.reserve(g.edges().size());

    std::vector<WeightedEdge> kept_edges;
    for (const auto& e : g.edges()) {
        const double pa = disparity_pvalue(e.weight / g.strength(e.a), g.degree(e.a));
        const double pb = disparity_pvalue(e.weight / g.strength(e.b), g.degree(e.b));
        const double score = rule == BackboneRule::any ? std::min(pa, pb) : std::max(pa, pb);
        const bool keep = score < alpha;
        result.per_edge_alpha.push_back(std::min(pa, pb));
        result.kept.push_back(keep);
        if (keep) kept_edges.push_back(e);
    }

    // Isolated nodes stay in the node set; the figure draws every page.
    std::vector<double> node_values;
    if (g.has_node_values()) {
        node_values.resize(static_cast<std::size_t>(g.node_count()));
        for (int i = 0; i < g.node_count(); ++i)
            node_values[static_cast<std::size_t>(i)] = g.node_value(i);
    }
    result.backbone = make_graph_from_sorted(g.node_ids(), std::move(kept_edges),
                                             std::move(node_values));
    return result;
}

BackboneResult backbone_for_figure(const WeightedGraph& g) {
    return disparity_filter(g, kFigureAlpha);
}

} // namespace echograph
