#pragma once

#include <vector>

#include "icrt/ptree.hpp"

namespace icrt {

// Vertex removal clocks: times[v] ~ Exp(rate p_v), order sorted by time.
struct RemovalOrder {
    std::vector<double> times; // size n+1, 1-based
    std::vector<int> order;    // permutation of [n], earliest first

    int first_removed() const { return order.front(); }
    static RemovalOrder from_times(std::vector<double> times);
};

RemovalOrder sample_order(const RootedLabeledTree& t, const ProbVector& p, Rng& rng);

// Cut tree of a pruning: root = first removed vertex, children subtrees =
// cut trees of the components left by each removal. Same vertex set as the
// source tree. provenance[v] = vertex set of the component v was removed
// from (v included), sorted.
struct DiscreteCutTree {
    RootedLabeledTree tree;
    std::vector<std::vector<int>> provenance; // size n+1, 1-based
};

DiscreteCutTree cut_tree(const RootedLabeledTree& t, const RemovalOrder& ord);

// For each vertex v, one trace per subtree of C above v: the unique source-tree
// neighbour of v inside that subtree. Subtrees ranked by decreasing p-mass,
// ties by smallest vertex id in the subtree.
struct TraceMap {
    std::vector<std::vector<int>> traces; // size n+1; traces[v][i] = u_{v,i}
};

TraceMap traces(const RootedLabeledTree& t, const ProbVector& p, const RemovalOrder& ord,
                const DiscreteCutTree& c);

// Number of vertices removed while still connected to v (v itself counts).
int record_count(const RootedLabeledTree& t, const RemovalOrder& ord, int v);

// Jumps of u's and v's components strictly after their separation time.
int pair_record_distance(const RootedLabeledTree& t, const RemovalOrder& ord, int u, int v);

// Batched variants of the two record statistics, O(n^2 log n) per instance
// instead of a fresh path scan per query. Same definitions, no cut tree.
std::vector<int> record_counts(const RootedLabeledTree& t, const RemovalOrder& ord);
std::vector<std::vector<int>> pair_record_distances(const RootedLabeledTree& t,
                                                    const RemovalOrder& ord);

// Graph distance between u and v in a rooted tree (BFS oracle helper).
int tree_distance(const RootedLabeledTree& t, int u, int v);

} // namespace icrt
