#include "icrt/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <tuple>

#include "icrt/errors.hpp"

namespace icrt {

SkeletonTree::Point SkeletonTree::leaf(int j) const {
    require(j >= 0 && j <= k, errc::too_few_leaves, "leaf index out of range");
    if (j == 0) return root();
    return Point{j - 1, cutpoints[j - 1]};
}

int SkeletonTree::find_segment(double coord) const {
    // owning segment of coord in (0, eta_k]: first cutpoint >= coord
    auto it = std::lower_bound(cutpoints.begin(), cutpoints.end(), coord);
    return static_cast<int>(it - cutpoints.begin());
}

double SkeletonTree::depth(const Point& p) const {
    if (is_root(p)) return 0.0;
    const Segment& s = segments[p.seg];
    return (p.coord - s.lo) + s.attach_depth;
}

SkeletonTree::Point SkeletonTree::attach_point(int seg) const {
    const Segment& s = segments[seg];
    return Point{s.attach_seg, s.attach_coord};
}

SkeletonTree::Point SkeletonTree::mrca(Point a, Point b) const {
    if (is_root(a) || is_root(b)) return root();
    while (a.seg != b.seg) {
        if (segments[a.seg].depth >= segments[b.seg].depth)
            a = attach_point(a.seg);
        else
            b = attach_point(b.seg);
        if (is_root(a) || is_root(b)) return root();
    }
    return a.coord <= b.coord ? a : b;
}

double SkeletonTree::distance(const Point& a, const Point& b) const {
    return depth(a) + depth(b) - 2.0 * depth(mrca(a, b));
}

SkeletonTree::PathDecomposition SkeletonTree::path(Point a, Point b) const {
    PathDecomposition out;
    out.meet = mrca(a, b);
    auto descend = [&](Point x) {
        // intervals from x down to the meet (an ancestor point of x)
        if (is_root(x) || x == out.meet) return;
        Point cur = x;
        if (is_root(out.meet)) {
            for (;;) {
                out.intervals.emplace_back(cur.seg, segments[cur.seg].lo, cur.coord);
                if (cur.seg == 0) return;
                cur = attach_point(cur.seg);
                if (is_root(cur)) return;
            }
        }
        while (cur.seg != out.meet.seg) {
            out.intervals.emplace_back(cur.seg, segments[cur.seg].lo, cur.coord);
            cur = attach_point(cur.seg);
        }
        if (cur.coord > out.meet.coord)
            out.intervals.emplace_back(cur.seg, out.meet.coord, cur.coord);
    };
    descend(a);
    descend(b);
    return out;
}

std::vector<int> SkeletonTree::hubs_on_path(const Point& a, const Point& b) const {
    auto pd = path(a, b);
    std::vector<int> out;
    for (auto [seg, lo, hi] : pd.intervals) {
        const auto& hs = seg_hubs[seg];
        auto it = std::upper_bound(hs.begin(), hs.end(), std::make_pair(lo, 1 << 30));
        for (; it != hs.end() && it->first <= hi; ++it) out.push_back(it->second);
    }
    // the meet itself lies on the path; it may be a hub (gluing point)
    if (!is_root(pd.meet)) {
        const auto& hs = seg_hubs[pd.meet.seg];
        auto it = std::lower_bound(hs.begin(), hs.end(), std::make_pair(pd.meet.coord, -1));
        if (it != hs.end() && it->first == pd.meet.coord) out.push_back(it->second);
    }
    // endpoints are not interior
    auto drop = [&](const Point& p) {
        out.erase(std::remove_if(out.begin(), out.end(),
                                 [&](int h) { return hubs[h].coord == p.coord; }),
                  out.end());
    };
    drop(a);
    drop(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void SkeletonTree::build_index() {
    int max_theta = -1;
    for (const auto& h : hubs) max_theta = std::max(max_theta, h.theta_index);
    hub_of_theta.assign(max_theta + 1, -1);
    for (std::size_t i = 0; i < hubs.size(); ++i) hub_of_theta[hubs[i].theta_index] =
        static_cast<int>(i);
    seg_hubs.assign(segments.size(), {});
    for (std::size_t i = 0; i < hubs.size(); ++i)
        seg_hubs[hubs[i].seg].emplace_back(hubs[i].coord, static_cast<int>(i));
    for (auto& v : seg_hubs) std::sort(v.begin(), v.end());
}

SkeletonTree build_line_breaking(const ThetaSpec& spec, int k, Rng& rng) {
    require(k >= 1, errc::k_zero, "k >= 1 required");
    require(spec.beta > 0.0 || !spec.theta.empty(), errc::empty_intensity,
            "beta = 0 with empty theta has no cutpoints");

    const int nh = static_cast<int>(spec.theta.size());
    // arrival candidates: (time, source); source -1 = quadratic stream, else hub
    struct Arrival {
        double t;
        int src;
        double joint; // jointpoint carried with the arrival
        bool operator>(const Arrival& o) const {
            return std::tie(t, src) > std::tie(o.t, o.src);
        }
    };
    std::priority_queue<Arrival, std::vector<Arrival>, std::greater<Arrival>> heap;

    std::vector<double> first_arrival(nh);
    for (int i = 0; i < nh; ++i) {
        double f = rng.exponential(spec.theta[i]);
        first_arrival[i] = f;
        double second = f + rng.exponential(spec.theta[i]);
        heap.push(Arrival{second, i, f});
    }
    double u_last = 0.0;
    auto push_next_u = [&]() {
        if (spec.beta <= 0.0) return;
        // x-marginal has cumulative intensity beta*x^2/2
        u_last = std::sqrt(u_last * u_last + 2.0 * rng.exponential(1.0) / spec.beta);
        heap.push(Arrival{u_last, -1, u_last * rng.uniform01()});
    };
    push_next_u();

    SkeletonTree sk;
    sk.k = k;
    sk.cutpoints.reserve(k);
    sk.segments.resize(k);
    sk.segments[0].lo = 0.0;
    std::vector<int> hub_slot(nh, -1);

    for (int m = 1; m <= k; ++m) {
        Arrival a = heap.top();
        heap.pop();
        sk.cutpoints.push_back(a.t);
        sk.segments[m - 1].hi = a.t;
        if (a.src < 0) {
            push_next_u();
        } else {
            heap.push(Arrival{a.t + rng.exponential(spec.theta[a.src]), a.src,
                              first_arrival[a.src]});
        }
        if (m == k) break; // last cutpoint only closes the last segment
        SkeletonTree::Segment& next = sk.segments[m];
        next.lo = a.t;
        next.attach_coord = a.joint;
        next.attach_seg = sk.find_segment(a.joint);
        next.attach_depth = (a.joint - sk.segments[next.attach_seg].lo) +
                            sk.segments[next.attach_seg].attach_depth;
        next.depth = sk.segments[next.attach_seg].depth + 1;
        if (a.src >= 0) {
            int i = a.src;
            if (hub_slot[i] < 0) {
                hub_slot[i] = static_cast<int>(sk.hubs.size());
                sk.hubs.push_back(SkeletonTree::Hub{i, spec.theta[i], first_arrival[i],
                                                    sk.find_segment(first_arrival[i]), 0});
            }
            next.attach_hub = hub_slot[i];
            ++sk.hubs[hub_slot[i]].branches;
        }
    }

    // register the still-unattached hubs whose first point made it into the tree
    // (order of `hubs` stays as encountered; attach_hub indices refer into it)
    for (int i = 0; i < nh; ++i)
        if (hub_slot[i] < 0 && first_arrival[i] <= sk.total_length())
            sk.hubs.push_back(SkeletonTree::Hub{i, spec.theta[i], first_arrival[i],
                                                sk.find_segment(first_arrival[i]), 0});
    sk.build_index();
    return sk;
}

std::optional<int> hub_degree(const SkeletonTree& sk, int theta_index_1based) {
    int ti = theta_index_1based - 1;
    require(ti >= 0, errc::unknown_hub, "hub ids are 1-based theta indices");
    if (ti >= static_cast<int>(sk.hub_of_theta.size()) || sk.hub_of_theta[ti] < 0)
        return std::nullopt; // first point beyond eta_k, or never drawn here
    const auto& h = sk.hubs[sk.hub_of_theta[ti]];
    // two sides of its own segment plus one component per glued branch
    return 2 + h.branches;
}

double local_time_estimate(const SkeletonTree& sk, const ThetaSpec& spec,
                           int theta_index_1based) {
    require(theta_index_1based >= 1 &&
                theta_index_1based <= static_cast<int>(spec.theta.size()),
            errc::unknown_hub, "theta index out of range");
    auto deg = hub_degree(sk, theta_index_1based);
    require(deg.has_value(), errc::absent_hub, "hub not in the skeleton yet");
    return static_cast<double>(*deg) / psi_inv(spec, static_cast<double>(sk.k));
}

double eta_ratio(const SkeletonTree& sk, const ThetaSpec& spec) {
    require(sk.k >= 2, errc::k_zero, "eta ratio needs k >= 2");
    return sk.cutpoints[sk.k - 2] / psi_inv(spec, static_cast<double>(sk.k));
}

LeafPairSample sample_leaf_pair(const SkeletonTree& sk, Rng& rng) {
    require(sk.leaf_count() >= 2, errc::too_few_leaves, "need at least 2 leaves");
    int a = static_cast<int>(rng.below(sk.leaf_count()));
    int b = static_cast<int>(rng.below(sk.leaf_count() - 1));
    if (b >= a) ++b;
    LeafPairSample s;
    s.leaf_a = a;
    s.leaf_b = b;
    s.a = sk.leaf(a);
    s.b = sk.leaf(b);
    s.distance = sk.distance(s.a, s.b);
    for (int h : sk.hubs_on_path(s.a, s.b))
        s.hubs_on_path.emplace_back(sk.hubs[h].theta_index + 1, sk.hubs[h].theta);
    return s;
}

double approx_distance(const std::vector<std::pair<int, double>>& hubs_on_path,
                       const ThetaSpec& spec, double eps) {
    double g = gamma_theta(spec, eps);
    require(g > 0.0, errc::gamma_zero, "gamma(eps) = 0; use the quadratic-count route");
    int count = 0;
    for (const auto& [idx, th] : hubs_on_path) count += th > eps;
    return static_cast<double>(count) / g;
}

} // namespace icrt
