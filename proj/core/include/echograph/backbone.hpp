#pragma once

#include "echograph/graph.hpp"

#include <string>
#include <vector>

namespace echograph {

/// Keep rule for the disparity filter: an edge survives when it is
/// significant at `any` endpoint (default) or must be significant at
/// `both`. Degree-1 endpoints never assert significance.
enum class BackboneRule { any, both };

BackboneRule parse_backbone_rule(const std::string& name);

struct BackboneResult {
    WeightedGraph backbone;              // kept edges; all input nodes retained
    double alpha = 0.0;                  // significance level used
    BackboneRule rule = BackboneRule::any;
    /// Per input edge (aligned with the input graph's edge order): the
    /// smaller of the two endpoint disparity p-values.
    std::vector<double> per_edge_alpha;
    /// Flags, aligned with the input edge order.
    std::vector<bool> kept;
};

/// Disparity p-value for one endpoint: the probability that a uniform
/// split of the endpoint's strength over its k edges produces a
/// normalized weight of at least p. Closed form (1-p)^(k-1); degree-1
/// endpoints return 1 (no claim is possible from a single edge).
double disparity_pvalue(double normalized_weight, int degree);

/// Multiscale backbone: an edge is kept iff its disparity p-value beats
/// `alpha` (strict <) at the required endpoints. Scale-invariant in the
/// weights. Throws ParameterError unless 0 < alpha < 1.
BackboneResult disparity_filter(const WeightedGraph& g, double alpha,
                                BackboneRule rule = BackboneRule::any);

/// The significance level used for the backbone visualization.
inline constexpr double kFigureAlpha = 0.03;

/// Convenience wrapper fixing alpha = 0.03.
BackboneResult backbone_for_figure(const WeightedGraph& g);

} // namespace echograph
