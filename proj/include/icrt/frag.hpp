#pragma once

#include <vector>

#include "icrt/rng.hpp"
#include "icrt/skeleton.hpp"

namespace icrt {

// Finite graph form of the subtree spanned by the tracked leaves: nodes are
// tracked leaves, branch points, gluing points and hubs; edges are the
// hub-free stretches between consecutive nodes inside one segment.
struct SpannedGraph {
    struct Node {
        int seg = 0;
        double coord = 0.0;
        int hub = -1;  // hubs-slot in the skeleton when this node is a hub
        int leaf = 0;  // tracked id 1..m, or 0
    };
    struct Edge {
        int lower = 0, upper = 0; // node ids; `upper` sits at coordinate hi in seg
        int seg = 0;
        double lo = 0.0, hi = 0.0; // coordinate span (lo, hi] within seg
        double len = 0.0;
    };
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> incident; // node -> edge ids
    double total_len = 0.0;
};

struct CutEvent {
    double t = 0.0;
    bool is_hub = false;
    int hub_theta_index = -1; // 1-based theta index for hub cuts
    int node = -1;            // graph node for hub cuts
    int edge = -1;            // graph edge for skeletal cuts
    int seg = 0;              // location, for serialization
    double coord = 0.0;
};

// One partition refinement, delta-encoded: the parent block splits into the
// listed `smalls` plus the remainder (largest child, identified by its
// smallest member).
struct SplitRecord {
    int event = -1; // index into events
    double t = 0.0;
    int remainder_rep = 0;
    std::vector<std::vector<int>> smalls; // tracked ids, each sorted
};

struct FragHistory {
    int m = 0;
    double tau_full = 0.0; // time of the last refinement (all singletons after)
    double horizon = 0.0;  // events generated up to max(tau_full, requested horizon)
    std::vector<int> tracked_leaves; // skeleton leaf indices, tracked id i+1 = entry i
    std::vector<CutEvent> events;    // time-ascending
    std::vector<SplitRecord> splits; // time-ascending

    // geometry, present when produced in-process (not serialized)
    bool has_geometry = false;
    SpannedGraph graph;
    std::vector<int> leaf_node; // tracked id (1-based) -> graph node
};

// Restriction of the Poisson pruning to the spanned subtree of m uniformly
// chosen tracked leaves: skeletal cuts at rate beta per unit length, one
// exponential clock per hub on the subtree. Events run until every tracked
// pair is separated, extended to `horizon` when that is larger.
FragHistory simulate(const SkeletonTree& sk, const ThetaSpec& spec, int m, Rng& rng,
                     double horizon = 0.0);

// Fraction of tracked leaves sharing `leaf`'s block at time t (right-continuous).
double block_mass(const FragHistory& h, int leaf, double t);

} // namespace icrt
