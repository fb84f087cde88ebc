#include "icrt/frag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "icrt/errors.hpp"

namespace icrt {

namespace {

using Point = SkeletonTree::Point;

SpannedGraph build_spanned_graph(const SkeletonTree& sk, const std::vector<Point>& leaves,
                                 std::vector<int>& leaf_node_out) {
    const int m = static_cast<int>(leaves.size());
    // union of all paths to leaf 1 gives the spanned subtree; per segment the
    // union is a single coordinate interval (tree convexity)
    std::map<int, std::pair<double, double>> span; // seg -> (lo, hi]
    auto add_interval = [&](int seg, double lo, double hi) {
        auto [it, fresh] = span.emplace(seg, std::make_pair(lo, hi));
        if (!fresh) {
            it->second.first = std::min(it->second.first, lo);
            it->second.second = std::max(it->second.second, hi);
        }
    };
    bool root_in_tree = false;
    for (const auto& lf : leaves)
        if (sk.is_root(lf)) root_in_tree = true;
    for (int i = 1; i < m; ++i) {
        auto pd = sk.path(leaves[0], leaves[i]);
        for (auto [seg, lo, hi] : pd.intervals) add_interval(seg, lo, hi);
        if (sk.is_root(pd.meet)) root_in_tree = true;
    }

    // collect node coordinates per spanned segment
    std::map<std::pair<int, double>, int> node_id; // (seg, coord) -> node
    SpannedGraph g;
    auto get_node = [&](int seg, double coord) {
        auto [it, fresh] = node_id.emplace(std::make_pair(seg, coord), 0);
        if (fresh) {
            it->second = static_cast<int>(g.nodes.size());
            g.nodes.push_back(SpannedGraph::Node{seg, coord, -1, 0});
        }
        return it->second;
    };
    if (root_in_tree) get_node(0, 0.0);

    std::map<int, std::vector<double>> coords; // per segment, interior node coords
    for (auto& [seg, iv] : span) {
        auto& cs = coords[seg];
        cs.push_back(iv.second); // top of the interval is always a node
        // hubs inside the interval
        for (auto [c, h] : sk.seg_hubs[seg])
            if (c > iv.first && c <= iv.second) cs.push_back(c);
        if (iv.first > sk.segments[seg].lo) cs.push_back(iv.first); // interior meet point
    }
    // gluing points of spanned segments are nodes of their parent segment
    for (auto& [seg, iv] : span) {
        if (iv.first > sk.segments[seg].lo) continue; // does not reach its gluing point
        const auto& s = sk.segments[seg];
        if (s.attach_seg < 0) continue; // segment 0 glues at the root
        auto it = span.find(s.attach_seg);
        require(it != span.end() && s.attach_coord >= it->second.first &&
                    s.attach_coord <= it->second.second,
                errc::inconsistent_inputs, "gluing point escapes the spanned set");
        coords[s.attach_seg].push_back(s.attach_coord);
    }

    for (auto& [seg, cs] : coords) {
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        for (double c : cs) get_node(seg, c);
    }
    // hub / leaf annotations
    for (std::size_t h = 0; h < sk.hubs.size(); ++h) {
        auto it = node_id.find({sk.hubs[h].seg, sk.hubs[h].coord});
        if (it != node_id.end()) g.nodes[it->second].hub = static_cast<int>(h);
    }
    leaf_node_out.assign(m + 1, -1);
    for (int i = 0; i < m; ++i) {
        auto it = node_id.find({leaves[i].seg, leaves[i].coord});
        if (sk.is_root(leaves[i])) it = node_id.find({0, 0.0});
        require(it != node_id.end(), errc::inconsistent_inputs, "tracked leaf is not a node");
        g.nodes[it->second].leaf = i + 1;
        leaf_node_out[i + 1] = it->second;
    }

    // edges: consecutive coords within a segment, plus the drop to the gluing point
    for (auto& [seg, cs] : coords) {
        auto iv = span.at(seg);
        for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
            int lo_n = node_id.at({seg, cs[i]});
            int up_n = node_id.at({seg, cs[i + 1]});
            g.edges.push_back(
                SpannedGraph::Edge{lo_n, up_n, seg, cs[i], cs[i + 1], cs[i + 1] - cs[i]});
        }
        if (iv.first <= sk.segments[seg].lo) {
            const auto& s = sk.segments[seg];
            int up_n = node_id.at({seg, cs.front()});
            int lo_n = (s.attach_seg < 0) ? node_id.at({0, 0.0})
                                          : node_id.at({s.attach_seg, s.attach_coord});
            if (!(s.attach_seg < 0 && cs.front() == 0.0))
                g.edges.push_back(SpannedGraph::Edge{lo_n, up_n, seg, s.lo, cs.front(),
                                                     cs.front() - s.lo});
        }
    }
    g.incident.assign(g.nodes.size(), {});
    g.total_len = 0.0;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        g.incident[g.edges[e].lower].push_back(static_cast<int>(e));
        g.incident[g.edges[e].upper].push_back(static_cast<int>(e));
        g.total_len += g.edges[e].len;
    }
    return g;
}

// Union-find over graph pieces: one element per edge sub-interval (edge cuts
// split an edge into cuts+1 pieces) plus one element per node.
struct PieceForest {
    const SpannedGraph& g;
    std::vector<std::vector<double>> edge_cuts; // sorted offsets (coordinates) per edge
    std::vector<int> piece_start;               // element range begin per edge
    int node_base = 0;
    std::vector<int> uf;
    std::vector<int> leaf_count;

    PieceForest(const SpannedGraph& graph, const std::vector<CutEvent>& events, double tmax)
        : g(graph) {
        edge_cuts.assign(g.edges.size(), {});
        std::vector<char> node_cut(g.nodes.size(), 0);
        for (const auto& ev : events) {
            if (ev.t > tmax) continue;
            if (ev.is_hub)
                node_cut[ev.node] = 1;
            else
                edge_cuts[ev.edge].push_back(ev.coord);
        }
        piece_start.assign(g.edges.size() + 1, 0);
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            std::sort(edge_cuts[e].begin(), edge_cuts[e].end());
            piece_start[e + 1] = piece_start[e] + static_cast<int>(edge_cuts[e].size()) + 1;
        }
        node_base = piece_start.back();
        int total = node_base + static_cast<int>(g.nodes.size());
        uf.resize(total);
        std::iota(uf.begin(), uf.end(), 0);
        leaf_count.assign(total, 0);
        for (std::size_t v = 0; v < g.nodes.size(); ++v)
            if (g.nodes[v].leaf > 0) leaf_count[node_base + v] = 1;
        // join pieces to their end nodes wherever no cut separates them
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            if (!node_cut[g.edges[e].lower]) unite(piece_start[e], node_base + g.edges[e].lower);
            int last = piece_start[e + 1] - 1;
            if (!node_cut[g.edges[e].upper]) unite(last, node_base + g.edges[e].upper);
        }
    }

    int find(int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        uf[a] = b;
        leaf_count[b] += leaf_count[a];
    }

    // piece of edge e on the given side of coordinate c (side < 0: below c)
    int piece_at(int e, double c, int side) const {
        const auto& cuts = edge_cuts[e];
        auto it = (side < 0) ? std::lower_bound(cuts.begin(), cuts.end(), c)
                             : std::upper_bound(cuts.begin(), cuts.end(), c);
        return piece_start[e] + static_cast<int>(it - cuts.begin());
    }
    // elements adjacent to a hub node: the nearest piece of each incident edge
    std::vector<int> stubs(int node) const {
        std::vector<int> out;
        for (int e : g.incident[node]) {
            if (g.edges[e].lower == node)
                out.push_back(piece_start[e]);
            if (g.edges[e].upper == node)
                out.push_back(piece_start[e + 1] - 1);
        }
        return out;
    }
};

} // namespace

FragHistory simulate(const SkeletonTree& sk, const ThetaSpec& spec, int m, Rng& rng,
                     double horizon) {
    require(sk.k >= 1, errc::empty_skeleton, "skeleton has no segments");
    require(m >= 2, errc::m_too_large, "m >= 2 required");
    require(m <= sk.leaf_count(), errc::m_too_large,
            "m = " + std::to_string(m) + " exceeds leaf count " +
                std::to_string(sk.leaf_count()));

    FragHistory h;
    h.m = m;
    h.tracked_leaves = rng.sample_without_replacement(sk.leaf_count(), m);
    std::vector<Point> pts;
    pts.reserve(m);
    for (int j : h.tracked_leaves) pts.push_back(sk.leaf(j));
    h.graph = build_spanned_graph(sk, pts, h.leaf_node);
    h.has_geometry = true;
    const SpannedGraph& g = h.graph;

    // hub clocks, drawn once
    std::vector<std::pair<double, int>> hub_events; // (time, node)
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
        if (g.nodes[v].hub >= 0)
            hub_events.emplace_back(rng.exponential(sk.hubs[g.nodes[v].hub].theta),
                                    static_cast<int>(v));
    std::sort(hub_events.begin(), hub_events.end());

    // skeletal stream, extended lazily; the next pending arrival carries over
    // between horizon extensions
    std::vector<double> cum_len(g.edges.size() + 1, 0.0);
    for (std::size_t e = 0; e < g.edges.size(); ++e) cum_len[e + 1] = cum_len[e] + g.edges[e].len;
    const double skel_rate = spec.beta * g.total_len;
    double next_skel_t = (skel_rate > 0.0) ? rng.exponential(skel_rate)
                                           : std::numeric_limits<double>::infinity();
    std::vector<CutEvent> skel_events;
    auto extend_skeletal = [&](double until) {
        while (next_skel_t <= until) {
            double pos = rng.uniform01() * g.total_len;
            int e = static_cast<int>(std::upper_bound(cum_len.begin(), cum_len.end(), pos) -
                                     cum_len.begin()) - 1;
            e = std::min<int>(std::max(e, 0), static_cast<int>(g.edges.size()) - 1);
            CutEvent ev;
            ev.t = next_skel_t;
            ev.is_hub = false;
            ev.edge = e;
            ev.seg = g.edges[e].seg;
            ev.coord = g.edges[e].lo + (pos - cum_len[e]);
            skel_events.push_back(ev);
            next_skel_t += rng.exponential(skel_rate);
        }
    };

    auto assemble_events = [&](double tmax) {
        std::vector<CutEvent> evs;
        for (auto [t, node] : hub_events) {
            if (t > tmax) break;
            CutEvent ev;
            ev.t = t;
            ev.is_hub = true;
            ev.node = node;
            ev.hub_theta_index = sk.hubs[g.nodes[node].hub].theta_index + 1;
            ev.seg = g.nodes[node].seg;
            ev.coord = g.nodes[node].coord;
            evs.push_back(ev);
        }
        for (const auto& ev : skel_events)
            if (ev.t <= tmax) evs.push_back(ev);
        std::sort(evs.begin(), evs.end(),
                  [](const CutEvent& a, const CutEvent& b) { return a.t < b.t; });
        return evs;
    };

    // grow the horizon until every tracked pair is separated
    double upper = std::max(horizon, 1.0);
    for (;;) {
        extend_skeletal(upper);
        auto evs = assemble_events(upper);
        PieceForest pf(g, evs, upper);
        bool separated = true;
        for (int i = 1; i <= m && separated; ++i)
            separated = pf.leaf_count[pf.find(pf.node_base + h.leaf_node[i])] <= 1;
        if (separated) {
            h.events = std::move(evs);
            break;
        }
        require(upper < 1e12, errc::inconsistent_inputs,
                "pruning does not separate the tracked leaves");
        upper *= 2.0;
    }

    // undo cuts in reverse time to extract the refinement records
    PieceForest pf(g, h.events, upper);
    std::vector<std::vector<int>> members(pf.uf.size());
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
        if (g.nodes[v].leaf > 0) members[pf.node_base + v] = {g.nodes[v].leaf};

    std::vector<SplitRecord> rev_records;
    for (int ei = static_cast<int>(h.events.size()) - 1; ei >= 0; --ei) {
        const CutEvent& ev = h.events[ei];
        std::vector<int> parts;
        if (ev.is_hub) {
            parts = pf.stubs(ev.node);
            parts.push_back(pf.node_base + ev.node);
        } else {
            parts = {pf.piece_at(ev.edge, ev.coord, -1), pf.piece_at(ev.edge, ev.coord, +1)};
        }
        std::vector<int> roots;
        for (int p : parts) {
            int r = pf.find(p);
            if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
        }
        // forward meaning: this cut split the union into the populated pieces
        std::vector<std::tuple<std::size_t, int, int>> populated; // (size desc, min id, root)
        for (int r : roots)
            if (pf.leaf_count[r] > 0)
                populated.emplace_back(members[r].size(),
                                       *std::min_element(members[r].begin(), members[r].end()),
                                       r);
        if (populated.size() >= 2) {
            std::sort(populated.begin(), populated.end(), [](const auto& a, const auto& b) {
                if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
                return std::get<1>(a) < std::get<1>(b);
            });
            SplitRecord rec;
            rec.event = ei;
            rec.t = ev.t;
            rec.remainder_rep = std::get<1>(populated[0]);
            for (std::size_t i = 1; i < populated.size(); ++i) {
                auto small = members[std::get<2>(populated[i])];
                std::sort(small.begin(), small.end());
                rec.smalls.push_back(std::move(small));
            }
            rev_records.push_back(std::move(rec));
        }
        // merge, small member lists into large
        int acc = roots[0];
        for (std::size_t i = 1; i < roots.size(); ++i) {
            int r = roots[i];
            int ra = pf.find(acc), rb = pf.find(r);
            if (ra == rb) continue;
            if (members[ra].size() < members[rb].size()) std::swap(ra, rb);
            members[ra].insert(members[ra].end(), members[rb].begin(), members[rb].end());
            members[rb].clear();
            pf.uf[rb] = ra;
            pf.leaf_count[ra] += pf.leaf_count[rb];
            acc = ra;
        }
    }
    std::reverse(rev_records.begin(), rev_records.end());
    h.splits = std::move(rev_records);
    h.tau_full = h.splits.empty() ? 0.0 : h.splits.back().t;
    h.horizon = std::max(h.tau_full, horizon);
    // drop events past the reporting horizon
    std::vector<CutEvent> kept;
    std::vector<int> event_remap(h.events.size(), -1);
    for (std::size_t i = 0; i < h.events.size(); ++i)
        if (h.events[i].t <= h.horizon) {
            event_remap[i] = static_cast<int>(kept.size());
            kept.push_back(h.events[i]);
        }
    for (auto& rec : h.splits) rec.event = event_remap[rec.event];
    h.events = std::move(kept);
    return h;
}

double block_mass(const FragHistory& h, int leaf, double t) {
    require(leaf >= 1 && leaf <= h.m, errc::untracked_leaf,
            "leaf id must be in 1.." + std::to_string(h.m));
    std::vector<int> block_of(h.m + 1, 0);
    std::vector<int> size_of{h.m}; // block 0 = everything
    int next_id = 1;
    for (const auto& rec : h.splits) {
        if (rec.t > t) break;
        int parent = block_of[rec.remainder_rep];
        int moved = 0;
        for (const auto& small : rec.smalls) {
            int id = next_id++;
            size_of.push_back(static_cast<int>(small.size()));
            for (int x : small) block_of[x] = id;
            moved += static_cast<int>(small.size());
        }
        size_of[parent] -= moved;
    }
    return static_cast<double>(size_of[block_of[leaf]]) / static_cast<double>(h.m);
}

} // namespace icrt
