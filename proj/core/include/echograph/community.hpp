#pragma once

#include "echograph/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace echograph {

enum class CommunityAlgorithm { fast_greedy, walktrap, multilevel, label_propagation, external };

const char* to_string(CommunityAlgorithm a);

/// Assignment of every graph node to a community. Community ids are
/// contiguous from 0, numbered by first occurrence over the sorted node
/// order, so the community containing the lexicographically smallest node
/// is always 0.
struct Partition {
    std::vector<std::string> node_ids;   // sorted, matches the graph
    std::vector<int> community;          // aligned with node_ids
    CommunityAlgorithm algorithm = CommunityAlgorithm::external;
    double modularity = 0.0;
    std::optional<std::uint64_t> seed;
    bool converged = true;               // false: label propagation hit its sweep cap

    int community_count() const;
    /// Community of a node id; throws ContractError when the id is absent.
    int community_of(const std::string& id) const;
    /// Index lookup that returns nullopt instead of throwing.
    std::optional<int> find(const std::string& id) const;
    /// Checks alignment, contiguity from 0, and modularity range.
    void validate() const;
};

/// Builds a partition from raw labels (any integers), canonicalizing
/// community numbers. `node_ids` must be sorted.
Partition make_partition(std::vector<std::string> node_ids, const std::vector<int>& raw_labels,
                         CommunityAlgorithm algorithm);

struct PairCounts {
    std::uint64_t both_together = 0;
    std::uint64_t both_apart = 0;
    std::uint64_t first_only = 0;   // together in the first partition only
    std::uint64_t second_only = 0;
};

struct PartitionComparison {
    double rand_index = 0.0;
    double adjusted_rand = 0.0;
    PairCounts pair_counts;
};

/// Newman-Girvan weighted modularity
///   Q = (1/2m) sum_ij [w_ij - s_i s_j / (2m)] delta(c_i, c_j).
/// The partition must assign every node of g. Edgeless graphs score 0.
double modularity(const WeightedGraph& g, const Partition& p);

/// Greedy agglomeration: start from singletons, repeatedly merge the
/// adjacent community pair with the largest modularity gain (ties: lowest
/// label pair), cut the dendrogram at the maximum-modularity level.
/// Connected components never merge with each other.
Partition fast_greedy(const WeightedGraph& g);

/// Two-phase multilevel optimization: seeded-shuffle local moves until no
/// gain, aggregate communities into supernodes, repeat. Resolution 1.
Partition multilevel(const WeightedGraph& g, std::uint64_t seed);

/// Agglomeration by t-step random-walk distance; merges the adjacent pair
/// minimizing the walk-distance variance increase, cuts at maximum
/// modularity.
Partition walktrap(const WeightedGraph& g, int steps = 4);

/// Maximum number of label propagation sweeps before giving up.
inline constexpr int kLabelPropagationSweepCap = 1000;

/// Asynchronous label propagation: seeded random visiting order each
/// sweep; a node adopts the incident-weight-majority label, random
/// tie-break. Stops when every label is in its node's majority set, or
/// flags converged=false after the sweep cap.
Partition label_propagation(const WeightedGraph& g, std::uint64_t seed);

/// Pair-counting similarity: Rand index and Hubert-Arabie adjusted Rand.
/// Both partitions must cover the same node set.
PartitionComparison compare_partitions(const Partition& a, const Partition& b);

/// Assignment CSV: node,community (header mandatory). Reading
/// canonicalizes community numbers and marks the partition external.
Partition read_partition_csv(const std::filesystem::path& path);
void write_partition_csv(const Partition& p, std::ostream& out);
void write_partition_csv_file(const Partition& p, const std::filesystem::path& path);

} // namespace echograph
