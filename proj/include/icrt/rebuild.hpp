#pragma once

#include <string>
#include <utility>
#include <vector>

#include "icrt/prune.hpp"

namespace icrt {

// Edge set of a tree on [n] with no distinguished root; edges normalized
// (a < b) and sorted, so equality is plain comparison.
struct UnrootedTree {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    static UnrootedTree from_rooted(const RootedLabeledTree& t);
    static UnrootedTree from_edges(int n, std::vector<std::pair<int, int>> edges);
    bool operator==(const UnrootedTree& o) const { return n == o.n && edges == o.edges; }
};

// Inverse of the cut-tree map: the edge set { {v, trace} } recovers the
// source tree (root not recoverable).
UnrootedTree rebuild(const DiscreteCutTree& c, const TraceMap& tr);

// Path recovery through routings. Addresses follow the binary-string
// indexing of sub-paths: address u covers the pair (endpoint_u0, endpoint_u1),
// the most recent common ancestor of the pair marks the cut splitting it.
struct RoutePath {
    std::vector<std::pair<int, int>> edges;        // ordered along the path w1 -> w2
    std::vector<std::pair<std::string, int>> cuts; // (address, mrca vertex) per split
    std::vector<std::pair<std::string, int>> routings; // (address, trace vertex)
};

RoutePath route_path(const DiscreteCutTree& c, const TraceMap& tr, int w1, int w2);

} // namespace icrt
