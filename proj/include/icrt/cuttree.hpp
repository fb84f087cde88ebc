#pragma once

#include <string>
#include <vector>

#include "icrt/frag.hpp"
#include "icrt/params.hpp"

namespace icrt {

// Genealogy of the fragmentation: one internal node per refining cut, leaves
// are the tracked ids 1..m. Node heights are the cumulative mass integrals
// of the splitting blocks, so leaf-to-leaf distances through heights realize
// the cut-tree metric truncated at isolation.
struct GenealogyTree {
    struct Node {
        double time = 0.0;       // provenance cut time (0 for leaves)
        int event = -1;          // index into FragHistory::events (-1 for leaves)
        bool hub_cut = false;
        int hub_theta_index = 0; // 1-based theta index for hub cuts
        double height = 0.0;     // cumulative mass integral up to `time`
        int parent = -1;
        std::vector<int> children; // internal node ids or leaf handles
        int leaf = 0;              // tracked id for leaf nodes, 0 otherwise
        int block_size = 0;        // tracked leaves below this node
        int min_leaf = 0;          // smallest tracked id below
        int depth = 0;
    };

    int m = 0;
    std::vector<Node> nodes; // nodes[0..m-1] are the leaves (leaf i at i-1)
    int root = -1;

    int leaf_handle(int tracked_id) const { return tracked_id - 1; }
    bool is_leaf(int handle) const { return handle < m; }
    int lca(int a, int b) const;
    double leaf_height(int tracked_id) const { return nodes[leaf_handle(tracked_id)].height; }

    // prefix mass integral along leaf i's lineage: integral_0^t mass(block of i) ds,
    // clamped at the leaf's isolation
    double lineage_integral(int tracked_id, double t) const;
    double isolation_time(int tracked_id) const;
};

GenealogyTree genealogy(const FragHistory& h);

struct DeltaMatrix {
    int m = 0;
    std::vector<double> root_row;   // delta(0, i), i = 1..m at [i-1]
    std::vector<double> pair_;      // packed m x m
    std::vector<double> isolation;  // per tracked id
    std::vector<double> bias_bound; // per tracked id: (1/m) * (tau_full - isolation)

    double at(int i, int j) const { return pair_[(i - 1) * m + (j - 1)]; }
    double root(int i) const { return root_row[i - 1]; }
};

DeltaMatrix delta_matrix(const FragHistory& h);

// Largest four-point violation over quadruples of {0,1,...,m}; exhaustive when
// the quadruple count stays within `budget`, uniformly sampled otherwise.
double four_point_violation(const DeltaMatrix& d, long long budget, Rng& rng,
                            bool* exhaustive = nullptr);

struct PhiEstimate {
    int node = -1;
    bool hub_cut = false;
    int hub_theta_index = 0; // 1-based, hub cuts only
    double theta = 0.0;      // true local time of the hub (0 for skeletal cuts)
    std::vector<double> estimates; // deg(node, S_k)/psi_inv(k) per schedule entry
};

// Local-time estimates at genealogy nodes over nested leaf subsets of the
// sizes in k_schedule; hub-cut rows carry the true theta for comparison.
std::vector<PhiEstimate> phi_local_time_check(const GenealogyTree& g, const ThetaSpec& spec,
                                              const std::vector<int>& k_schedule);

// Trace-distance integrals delta_u(k) for the routing address `u` of the pair
// (i, j); addresses are binary strings, "0"/"1" are the endpoints themselves
// and each added "1" names the point created by the next cut on the sub-path.
std::vector<double> routing_delta(const FragHistory& h, int i, int j, const std::string& u,
                                  const std::vector<int>& kset);

// Skeletal-cut counting estimate of the i-j distance: N_t / (beta t).
double brownian_reconstruct(const FragHistory& h, int i, int j, double t, double beta);

// Sum over root->node genealogy edges of (edge delta-length) / (mass above);
// telescopes to the node's cut time minus the first cut's, which is the
// quantity's documented bias.
double tau_integral(const GenealogyTree& g, int node);

} // namespace icrt
