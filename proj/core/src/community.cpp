#include "echograph/community.hpp"

#include "echograph/csv.hpp"
#include "echograph/errors.hpp"
#include "echograph/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <utility>

namespace echograph {

namespace {

// Renumbers labels to contiguous ids ordered by first occurrence.
std::vector<int> canonicalize_labels(const std::vector<int>& raw) {
    std::vector<int> out(raw.size(), -1);
    std::map<int, int> remap;
    int next = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto [it, inserted] = remap.emplace(raw[i], next);
        if (inserted) ++next;
        out[i] = it->second;
    }
    return out;
}

Partition finish_partition(const WeightedGraph& g, const std::vector<int>& raw_labels,
                           CommunityAlgorithm algorithm) {
    Partition p = make_partition(g.node_ids(), raw_labels, algorithm);
    p.modularity = modularity(g, p);
    return p;
}

std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }

} // namespace

const char* to_string(CommunityAlgorithm a) {
    switch (a) {
    case CommunityAlgorithm::fast_greedy: return "fast_greedy";
    case CommunityAlgorithm::walktrap: return "walktrap";
    case CommunityAlgorithm::multilevel: return "multilevel";
    case CommunityAlgorithm::label_propagation: return "label_propagation";
    case CommunityAlgorithm::external: return "external";
    }
    return "external";
}

int Partition::community_count() const {
    int max_id = -1;
    for (int c : community) max_id = std::max(max_id, c);
    return max_id + 1;
}

int Partition::community_of(const std::string& id) const {
    auto found = find(id);
    if (!found) throw ContractError("partition does not cover node '" + id + "'");
    return *found;
}

std::optional<int> Partition::find(const std::string& id) const {
    auto it = std::lower_bound(node_ids.begin(), node_ids.end(), id);
    if (it == node_ids.end() || *it != id) return std::nullopt;
    return community[static_cast<std::size_t>(it - node_ids.begin())];
}

void Partition::validate() const {
    if (node_ids.size() != community.size())
        throw ContractError("partition labels misaligned with node ids");
    if (!std::is_sorted(node_ids.begin(), node_ids.end()))
        throw ContractError("partition node ids must be sorted");
    int count = community_count();
    std::vector<bool> seen(static_cast<std::size_t>(std::max(count, 0)), false);
    for (int c : community) {
        if (c < 0 || c >= count) throw ContractError("community id out of range");
        seen[static_cast<std::size_t>(c)] = true;
    }
    for (bool s : seen)
        if (!s) throw ContractError("community ids must be contiguous from 0");
    if (!node_ids.empty() && community[0] != 0)
        throw ContractError("community ids must be numbered by first occurrence");
}

Partition make_partition(std::vector<std::string> node_ids, const std::vector<int>& raw_labels,
                         CommunityAlgorithm algorithm) {
    if (node_ids.size() != raw_labels.size())
        throw ContractError("label count does not match node count");
    for (std::size_t i = 1; i < node_ids.size(); ++i)
        if (node_ids[i] <= node_ids[i - 1])
            throw IntegrityError("partition node ids must be sorted and unique");
    Partition p;
    p.node_ids = std::move(node_ids);
    p.community = canonicalize_labels(raw_labels);
    p.algorithm = algorithm;
    p.validate();
    return p;
}

double modularity(const WeightedGraph& g, const Partition& p) {
    if (p.node_ids != g.node_ids())
        throw ContractError("partition does not cover the graph's node set");
    double m = g.total_weight();
    if (m <= 0.0) return 0.0;
    int count = p.community_count();
    std::vector<double> intra(static_cast<std::size_t>(count), 0.0);
    std::vector<double> strength(static_cast<std::size_t>(count), 0.0);
    for (const WeightedEdge& e : g.edges()) {
        int ca = p.community[static_cast<std::size_t>(e.a)];
        int cb = p.community[static_cast<std::size_t>(e.b)];
        if (ca == cb) intra[static_cast<std::size_t>(ca)] += e.weight;
    }
    for (int i = 0; i < g.node_count(); ++i)
        strength[static_cast<std::size_t>(p.community[static_cast<std::size_t>(i)])] +=
            g.strength(i);
    double q = 0.0;
    for (int c = 0; c < count; ++c) {
        double sc = strength[static_cast<std::size_t>(c)] / (2.0 * m);
        q += intra[static_cast<std::size_t>(c)] / m - sc * sc;
    }
    return q;
}

Partition fast_greedy(const WeightedGraph& g) {
    int n = g.node_count();
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i;
    double m = g.total_weight();
    if (n == 0 || m <= 0.0)
        return finish_partition(g, labels, CommunityAlgorithm::fast_greedy);

    // Community label = smallest member node index. a[c] = strength
    // fraction, between[(c,d)] = inter-community weight / m.
    std::vector<double> a(static_cast<std::size_t>(n), 0.0);
    std::vector<double> self(static_cast<std::size_t>(n), 0.0);
    std::vector<bool> alive(static_cast<std::size_t>(n), true);
    for (int i = 0; i < n; ++i)
        a[static_cast<std::size_t>(i)] = g.strength(i) / (2.0 * m);
    std::map<std::pair<int, int>, double> between;
    for (const WeightedEdge& e : g.edges()) between[{e.a, e.b}] = e.weight / m;

    double q = 0.0;
    for (int i = 0; i < n; ++i) q -= a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)];

    std::vector<int> best_labels = labels;
    double best_q = q;

    while (!between.empty()) {
        double best_gain = -std::numeric_limits<double>::infinity();
        std::pair<int, int> best_pair{-1, -1};
        for (const auto& [pair, w] : between) {
            double gain = w - 2.0 * a[static_cast<std::size_t>(pair.first)] *
                                  a[static_cast<std::size_t>(pair.second)];
            if (gain > best_gain) {
                best_gain = gain;
                best_pair = pair;
            }
        }
        auto [c, d] = best_pair;   // c < d; merged community keeps label c
        q += best_gain;
        self[static_cast<std::size_t>(c)] +=
            self[static_cast<std::size_t>(d)] + between.at(best_pair);
        a[static_cast<std::size_t>(c)] += a[static_cast<std::size_t>(d)];
        alive[static_cast<std::size_t>(d)] = false;

        std::map<std::pair<int, int>, double> updated;
        for (const auto& [pair, w] : between) {
            auto [x, y] = pair;
            if (x == c && y == d) continue;
            if (x == d) x = c;
            if (y == d) y = c;
            if (x == y) continue;
            if (x > y) std::swap(x, y);
            updated[{x, y}] += w;
        }
        between = std::move(updated);

        for (int i = 0; i < n; ++i)
            if (labels[static_cast<std::size_t>(i)] == d) labels[static_cast<std::size_t>(i)] = c;
        if (q >= best_q) {
            best_q = q;
            best_labels = labels;
        }
    }
    (void)alive;
    return finish_partition(g, best_labels, CommunityAlgorithm::fast_greedy);
}

namespace {

// Working graph for multilevel aggregation; unlike the public graph it
// carries self-loops accumulated from collapsed communities.
struct LevelGraph {
    std::vector<std::vector<std::pair<int, double>>> adjacency;
    std::vector<double> self_loop;
    std::vector<double> strength;   // includes 2 * self_loop
    double two_m = 0.0;

    int size() const { return static_cast<int>(adjacency.size()); }
};

LevelGraph level_from_graph(const WeightedGraph& g) {
    LevelGraph lg;
    int n = g.node_count();
    lg.adjacency.resize(static_cast<std::size_t>(n));
    lg.self_loop.assign(static_cast<std::size_t>(n), 0.0);
    lg.strength.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (const auto& [j, w] : g.neighbors(i))
            lg.adjacency[static_cast<std::size_t>(i)].emplace_back(j, w);
        lg.strength[static_cast<std::size_t>(i)] = g.strength(i);
        lg.two_m += g.strength(i);
    }
    return lg;
}

// One round of local moves; returns the (non-canonical) community of each
// node, or nullopt when no node moved.
std::optional<std::vector<int>> local_moves(const LevelGraph& lg, Rng& rng) {
    int n = lg.size();
    std::vector<int> comm(static_cast<std::size_t>(n));
    std::vector<double> tot = lg.strength;   // community total strength
    for (int i = 0; i < n; ++i) comm[static_cast<std::size_t>(i)] = i;
    if (lg.two_m <= 0.0) return std::nullopt;

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);

    bool any_move = false;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int node : order) {
            int old_comm = comm[static_cast<std::size_t>(node)];
            double s_i = lg.strength[static_cast<std::size_t>(node)];

            std::map<int, double> links;   // weight from node into each community
            links[old_comm] += 0.0;
            for (const auto& [nbr, w] : lg.adjacency[static_cast<std::size_t>(node)])
                links[comm[static_cast<std::size_t>(nbr)]] += w;

            tot[static_cast<std::size_t>(old_comm)] -= s_i;
            double stay_gain =
                links[old_comm] - s_i * tot[static_cast<std::size_t>(old_comm)] / lg.two_m;
            int best_comm = old_comm;
            double best_gain = stay_gain;
            for (const auto& [c, w] : links) {
                if (c == old_comm) continue;
                double gain = w - s_i * tot[static_cast<std::size_t>(c)] / lg.two_m;
                if (gain > best_gain + 1e-12 ||
                    (gain > best_gain - 1e-12 && c < best_comm && best_comm != old_comm)) {
                    best_gain = gain;
                    best_comm = c;
                }
            }
            tot[static_cast<std::size_t>(best_comm)] += s_i;
            comm[static_cast<std::size_t>(node)] = best_comm;
            if (best_comm != old_comm) {
                improved = true;
                any_move = true;
            }
        }
    }
    if (!any_move) return std::nullopt;
    return comm;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<int>& dense_comm, int count) {
    LevelGraph next;
    next.adjacency.resize(static_cast<std::size_t>(count));
    next.self_loop.assign(static_cast<std::size_t>(count), 0.0);
    next.strength.assign(static_cast<std::size_t>(count), 0.0);
    next.two_m = lg.two_m;
    std::map<std::pair<int, int>, double> edges;
    for (int i = 0; i < lg.size(); ++i) {
        int ci = dense_comm[static_cast<std::size_t>(i)];
        next.self_loop[static_cast<std::size_t>(ci)] += lg.self_loop[static_cast<std::size_t>(i)];
        for (const auto& [j, w] : lg.adjacency[static_cast<std::size_t>(i)]) {
            if (j < i) continue;   // visit each undirected pair once
            int cj = dense_comm[static_cast<std::size_t>(j)];
            if (ci == cj) {
                next.self_loop[static_cast<std::size_t>(ci)] += w;
            } else {
                int x = std::min(ci, cj), y = std::max(ci, cj);
                edges[{x, y}] += w;
            }
        }
    }
    for (const auto& [pair, w] : edges) {
        next.adjacency[static_cast<std::size_t>(pair.first)].emplace_back(pair.second, w);
        next.adjacency[static_cast<std::size_t>(pair.second)].emplace_back(pair.first, w);
    }
    for (int c = 0; c < count; ++c) {
        double s = 2.0 * next.self_loop[static_cast<std::size_t>(c)];
        for (const auto& [j, w] : next.adjacency[static_cast<std::size_t>(c)]) {
            (void)j;
            s += w;
        }
        next.strength[static_cast<std::size_t>(c)] = s;
    }
    return next;
}

} // namespace

Partition multilevel(const WeightedGraph& g, std::uint64_t seed) {
    int n = g.node_count();
    std::vector<int> assignment(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) assignment[static_cast<std::size_t>(i)] = i;

    Rng rng(seed);
    LevelGraph lg = level_from_graph(g);
    while (true) {
        auto moved = local_moves(lg, rng);
        if (!moved) break;
        std::vector<int> dense = canonicalize_labels(*moved);
        int count = 0;
        for (int c : dense) count = std::max(count, c + 1);
        for (int i = 0; i < n; ++i)
            assignment[static_cast<std::size_t>(i)] =
                dense[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])];
        if (count == lg.size()) break;   // no actual coarsening
        lg = aggregate(lg, dense, count);
    }
    Partition p = finish_partition(g, assignment, CommunityAlgorithm::multilevel);
    p.seed = seed;
    return p;
}

Partition walktrap(const WeightedGraph& g, int steps) {
    if (steps < 1) throw ParameterError("walk length must be at least 1");
    int n = g.node_count();
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i;
    double m = g.total_weight();
    if (n == 0 || m <= 0.0)
        return finish_partition(g, labels, CommunityAlgorithm::walktrap);

    // t-step transition probabilities, one dense row per node. Isolated
    // nodes keep a unit self-probability and never merge.
    std::vector<std::vector<double>> walk(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        std::vector<double> row(static_cast<std::size_t>(n), 0.0);
        row[static_cast<std::size_t>(i)] = 1.0;
        for (int t = 0; t < steps; ++t) {
            std::vector<double> next(static_cast<std::size_t>(n), 0.0);
            for (int u = 0; u < n; ++u) {
                double p = row[static_cast<std::size_t>(u)];
                if (p == 0.0) continue;
                double s = g.strength(u);
                if (s <= 0.0) {
                    next[static_cast<std::size_t>(u)] += p;
                    continue;
                }
                for (const auto& [v, w] : g.neighbors(u))
                    next[static_cast<std::size_t>(v)] += p * w / s;
            }
            row = std::move(next);
        }
        walk[static_cast<std::size_t>(i)] = std::move(row);
    }

    // Agglomeration state: distributions averaged over members, Ward-style
    // variance cost, merging restricted to adjacent communities.
    std::vector<std::vector<double>> dist = walk;
    std::vector<int> size(static_cast<std::size_t>(n), 1);
    std::vector<bool> alive(static_cast<std::size_t>(n), true);
    std::set<std::pair<int, int>> adjacent;
    for (const WeightedEdge& e : g.edges()) adjacent.insert({e.a, e.b});

    auto merge_cost = [&](int c1, int c2) {
        double r2 = 0.0;
        for (int k = 0; k < n; ++k) {
            double sk = g.strength(k);
            if (sk <= 0.0) continue;
            double d = dist[static_cast<std::size_t>(c1)][static_cast<std::size_t>(k)] -
                       dist[static_cast<std::size_t>(c2)][static_cast<std::size_t>(k)];
            r2 += d * d / sk;
        }
        double s1 = size[static_cast<std::size_t>(c1)];
        double s2 = size[static_cast<std::size_t>(c2)];
        return s1 * s2 / (s1 + s2) / static_cast<double>(n) * r2;
    };

    std::vector<int> best_labels = labels;
    double best_q = modularity(g, make_partition(g.node_ids(), labels,
                                                 CommunityAlgorithm::walktrap));
    while (!adjacent.empty()) {
        double best_cost = std::numeric_limits<double>::infinity();
        std::pair<int, int> best_pair{-1, -1};
        for (const auto& pair : adjacent) {
            double cost = merge_cost(pair.first, pair.second);
            if (cost < best_cost) {
                best_cost = cost;
                best_pair = pair;
            }
        }
        auto [c, d] = best_pair;   // merged community keeps label c (c < d)
        double s1 = size[static_cast<std::size_t>(c)];
        double s2 = size[static_cast<std::size_t>(d)];
        for (int k = 0; k < n; ++k)
            dist[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)] =
                (s1 * dist[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)] +
                 s2 * dist[static_cast<std::size_t>(d)][static_cast<std::size_t>(k)]) /
                (s1 + s2);
        size[static_cast<std::size_t>(c)] += size[static_cast<std::size_t>(d)];
        alive[static_cast<std::size_t>(d)] = false;

        std::set<std::pair<int, int>> updated;
        for (auto [x, y] : adjacent) {
            if (x == c && y == d) continue;
            if (x == d) x = c;
            if (y == d) y = c;
            if (x == y) continue;
            if (x > y) std::swap(x, y);
            updated.insert({x, y});
        }
        adjacent = std::move(updated);

        for (int i = 0; i < n; ++i)
            if (labels[static_cast<std::size_t>(i)] == d) labels[static_cast<std::size_t>(i)] = c;
        double q = modularity(g, make_partition(g.node_ids(), labels,
                                                CommunityAlgorithm::walktrap));
        if (q >= best_q) {
            best_q = q;
            best_labels = labels;
        }
    }
    (void)alive;
    return finish_partition(g, best_labels, CommunityAlgorithm::walktrap);
}

Partition label_propagation(const WeightedGraph& g, std::uint64_t seed) {
    int n = g.node_count();
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i;

    Rng rng(seed);
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

    bool converged = false;
    for (int sweep = 0; sweep < kLabelPropagationSweepCap; ++sweep) {
        rng.shuffle(order);
        bool changed = false;
        for (int node : order) {
            const auto& nbrs = g.neighbors(node);
            if (nbrs.empty()) continue;
            std::map<int, double> tally;
            for (const auto& [v, w] : nbrs) tally[labels[static_cast<std::size_t>(v)]] += w;
            double best = -1.0;
            for (const auto& [lbl, w] : tally) {
                (void)lbl;
                best = std::max(best, w);
            }
            std::vector<int> winners;
            for (const auto& [lbl, w] : tally)
                if (w == best) winners.push_back(lbl);
            int current = labels[static_cast<std::size_t>(node)];
            if (std::find(winners.begin(), winners.end(), current) != winners.end()) continue;
            int pick = winners[rng.uniform_int(winners.size())];
            labels[static_cast<std::size_t>(node)] = pick;
            changed = true;
        }
        if (!changed) {
            converged = true;
            break;
        }
    }
    Partition p = finish_partition(g, labels, CommunityAlgorithm::label_propagation);
    p.seed = seed;
    p.converged = converged;
    return p;
}

PartitionComparison compare_partitions(const Partition& a, const Partition& b) {
    if (a.node_ids != b.node_ids)
        throw ContractError("partitions cover different node sets");
    std::size_t n = a.node_ids.size();

    std::map<std::pair<int, int>, std::uint64_t> table;
    std::map<int, std::uint64_t> row, col;
    for (std::size_t i = 0; i < n; ++i) {
        table[{a.community[i], b.community[i]}] += 1;
        row[a.community[i]] += 1;
        col[b.community[i]] += 1;
    }
    std::uint64_t sum_cells = 0, sum_rows = 0, sum_cols = 0;
    for (const auto& [key, c] : table) {
        (void)key;
        sum_cells += choose2(c);
    }
    for (const auto& [key, c] : row) {
        (void)key;
        sum_rows += choose2(c);
    }
    for (const auto& [key, c] : col) {
        (void)key;
        sum_cols += choose2(c);
    }
    std::uint64_t total = choose2(n);

    PartitionComparison out;
    out.pair_counts.both_together = sum_cells;
    out.pair_counts.first_only = sum_rows - sum_cells;
    out.pair_counts.second_only = sum_cols - sum_cells;
    out.pair_counts.both_apart = total - sum_rows - sum_cols + sum_cells;

    if (total == 0) {
        out.rand_index = 1.0;
        out.adjusted_rand = 1.0;
        return out;
    }
    out.rand_index =
        static_cast<double>(out.pair_counts.both_together + out.pair_counts.both_apart) /
        static_cast<double>(total);
    double expected = static_cast<double>(sum_rows) * static_cast<double>(sum_cols) /
                      static_cast<double>(total);
    double max_index = 0.5 * (static_cast<double>(sum_rows) + static_cast<double>(sum_cols));
    double denom = max_index - expected;
    out.adjusted_rand =
        denom == 0.0 ? 1.0 : (static_cast<double>(sum_cells) - expected) / denom;
    return out;
}

Partition read_partition_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open partition file '" + path.string() + "'");
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    if (!csv_read_record(in, fields, line_no))
        throw ParseError("partition file '" + path.string() + "' is empty");
    if (fields.size() < 2 || fields[0] != "node" || fields[1] != "community")
        throw ParseError("partition file must start with header node,community");

    std::map<std::string, int> assignment;
    while (csv_read_record(in, fields, line_no)) {
        if (fields.size() != 2)
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected 2 fields");
        int label = 0;
        const char* begin = fields[1].data();
        const char* end = begin + fields[1].size();
        auto [ptr, ec] = std::from_chars(begin, end, label);
        if (ec != std::errc() || ptr != end)
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": community must be an integer");
        if (!assignment.emplace(fields[0], label).second)
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": duplicate node '" + fields[0] + "'");
    }
    std::vector<std::string> nodes;
    std::vector<int> labels;
    nodes.reserve(assignment.size());
    labels.reserve(assignment.size());
    for (const auto& [node, label] : assignment) {
        nodes.push_back(node);
        labels.push_back(label);
    }
    return make_partition(std::move(nodes), labels, CommunityAlgorithm::external);
}

void write_partition_csv(const Partition& p, std::ostream& out) {
    csv_write_record(out, {"node", "community"});
    for (std::size_t i = 0; i < p.node_ids.size(); ++i)
        csv_write_record(out, {p.node_ids[i], std::to_string(p.community[i])});
}

void write_partition_csv_file(const Partition& p, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
    write_partition_csv(p, out);
}

} // namespace echograph
