#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "icrt/rng.hpp"

namespace icrt {

// Probability vector over [n], nonincreasing, strictly positive,
// summing to 1 within 1e-12.
struct ProbVector {
    std::vector<double> p;

    int n() const { return static_cast<int>(p.size()); }
    static ProbVector validated(std::vector<double> p);
    static ProbVector uniform(int n);
};

// Rooted tree labelled by {1,...,n}; parent[v] = 0 marks the root.
struct RootedLabeledTree {
    int n = 0;
    int root = 0;
    std::vector<int> parent; // size n+1, 1-based; parent[root] = 0

    std::vector<int> child_counts() const;         // D+ per vertex, 1-based
    std::vector<std::vector<int>> adjacency() const; // undirected, 1-based
    bool operator==(const RootedLabeledTree& o) const {
        return n == o.n && root == o.root && parent == o.parent;
    }
};

// Checks the parent map is a tree on [n] rooted at `root`; throws on violation.
void check_tree(const RootedLabeledTree& t);

// Product of p_i^(number of children of i).
double weight(const RootedLabeledTree& t, const ProbVector& p);

// All n^(n-1) rooted labelled trees, lexicographic by (root, sequence code).
// Guarded to n <= 7.
std::vector<RootedLabeledTree> enumerate_rooted_trees(int n);

// Index of t within enumerate_rooted_trees(t.n) without materializing the list.
std::uint64_t rooted_tree_rank(const RootedLabeledTree& t);
std::uint64_t rooted_tree_count(int n); // n^(n-1)

// Draw from the product tree law via the birthday-sequence rule: sample
// i.i.d. labels until every vertex has appeared; the first label is the
// root and each first appearance hangs below its predecessor.
RootedLabeledTree sample_ptree(const ProbVector& p, Rng& rng);

// Same construction driven by an explicit label sequence (1-based labels);
// used by tests to pin hand-traced instances.
RootedLabeledTree birthday_tree_from_sequence(int n, const std::function<int()>& next_label);

} // namespace icrt
