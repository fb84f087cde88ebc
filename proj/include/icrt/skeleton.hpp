#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "icrt/params.hpp"
#include "icrt/rng.hpp"

namespace icrt {

// Finite skeleton produced by the line-breaking construction. The first k
// cutpoints 0 < eta_1 < ... < eta_k partition [0, eta_k] into segments
// [eta_j, eta_{j+1}]; segment j >= 1 is glued at its left end onto the
// jointpoint of cutpoint eta_j. Every point of the tree is addressed by its
// global coordinate:coordinate x belongs to the segment with x in (lo, hi],
// and the root is coordinate 0. Hubs sit at the first arrival of their clock
// and collect one glued branch per later arrival that became a cutpoint.
struct SkeletonTree {
    struct Segment {
        double lo = 0.0, hi = 0.0;
        int attach_seg = -1;       // segment owning the gluing point (-1: root)
        double attach_coord = 0.0; // gluing point coordinate
        int attach_hub = -1;       // hub index in `hubs` when glued at a hub
        double attach_depth = 0.0; // distance from the root to the gluing point
        int depth = 0;             // hops to segment 0
    };
    struct Hub {
        int theta_index = 0; // 0-based into spec.theta
        double theta = 0.0;
        double coord = 0.0;  // first-arrival position
        int seg = 0;         // owning segment
        int branches = 0;    // segments glued here
    };
    struct Point {
        int seg = 0;
        double coord = 0.0;
        bool operator==(const Point& o) const { return seg == o.seg && coord == o.coord; }
    };

    int k = 0;
    std::vector<double> cutpoints; // cutpoints[i] = eta_{i+1}
    std::vector<Segment> segments; // k entries
    std::vector<Hub> hubs;         // hubs with coord <= eta_k, ascending theta_index
    std::vector<int> hub_of_theta; // theta_index -> hubs slot or -1
    std::vector<std::vector<std::pair<double, int>>> seg_hubs; // per segment, (coord, hub)

    double total_length() const { return cutpoints.back(); }
    int leaf_count() const { return k + 1; }
    Point root() const { return {0, 0.0}; }
    Point leaf(int j) const; // j in [0, k]; leaf 0 is the root end
    bool is_root(const Point& p) const { return p.coord == 0.0; }

    int find_segment(double coord) const;
    double depth(const Point& p) const;
    Point attach_point(int seg) const;
    Point mrca(Point a, Point b) const;
    double distance(const Point& a, const Point& b) const;

    // Half-open coordinate intervals (seg, lo, hi] covering the path a..b,
    // plus the meeting point. Intervals exclude the meet's own coordinate.
    struct PathDecomposition {
        std::vector<std::tuple<int, double, double>> intervals;
        Point meet;
    };
    PathDecomposition path(Point a, Point b) const;

    // Hubs strictly inside the path a..b (endpoints excluded), as hubs-slot ids.
    std::vector<int> hubs_on_path(const Point& a, const Point& b) const;

    void build_index(); // fills seg_hubs / hub_of_theta after construction
};

SkeletonTree build_line_breaking(const ThetaSpec& spec, int k, Rng& rng);

// Degree of hub `theta_index_1based` in the skeleton: component count of the
// skeleton minus the hub point. nullopt when the hub's first arrival lies
// beyond eta_k (the point is not part of the skeleton).
std::optional<int> hub_degree(const SkeletonTree& sk, int theta_index_1based);

// deg / psi_inv(k); errors when the hub is unknown or absent.
double local_time_estimate(const SkeletonTree& sk, const ThetaSpec& spec,
                           int theta_index_1based);

// eta_{k-1} / psi_inv(k), k >= 2.
double eta_ratio(const SkeletonTree& sk, const ThetaSpec& spec);

struct LeafPairSample {
    int leaf_a = 0, leaf_b = 0;
    SkeletonTree::Point a, b;
    double distance = 0.0;
    std::vector<std::pair<int, double>> hubs_on_path; // (theta index 1-based, theta)
};

LeafPairSample sample_leaf_pair(const SkeletonTree& sk, Rng& rng);

// Hub-counting distance approximation: #(path hubs with theta > eps) / gamma(eps).
double approx_distance(const std::vector<std::pair<int, double>>& hubs_on_path,
                       const ThetaSpec& spec, double eps);

} // namespace icrt
