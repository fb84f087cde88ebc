#include "icrt/cuttree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "icrt/errors.hpp"

namespace icrt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int GenealogyTree::lca(int a, int b) const {
    while (nodes[a].depth > nodes[b].depth) a = nodes[a].parent;
    while (nodes[b].depth > nodes[a].depth) b = nodes[b].parent;
    while (a != b) {
        a = nodes[a].parent;
        b = nodes[b].parent;
    }
    return a;
}

double GenealogyTree::isolation_time(int tracked_id) const {
    return nodes[leaf_handle(tracked_id)].time;
}

double GenealogyTree::lineage_integral(int tracked_id, double t) const {
    // ascend from the leaf: lineage blocks with their alive windows
    double total = 0.0;
    int cur = nodes[leaf_handle(tracked_id)].parent;
    double upper = std::min(t, isolation_time(tracked_id));
    // walk from the leaf's creating event down to the root, accumulating the
    // overlap of [parent_time, node_time) windows with [0, upper)
    while (cur >= 0) {
        const Node& nd = nodes[cur];
        double birth = (nd.parent >= 0) ? nodes[nd.parent].time : 0.0;
        double mass = static_cast<double>(nd.block_size) / m;
        double lo = birth, hi = std::min(nd.time, upper);
        if (hi > lo) total += (hi - lo) * mass;
        cur = nd.parent;
    }
    return total;
}

GenealogyTree genealogy(const FragHistory& h) {
    require(h.m >= 2, errc::incomplete_history, "history has fewer than 2 tracked leaves");
    GenealogyTree g;
    g.m = h.m;
    g.nodes.resize(h.m);
    for (int i = 1; i <= h.m; ++i) {
        auto& leaf = g.nodes[i - 1];
        leaf.leaf = i;
        leaf.block_size = 1;
        leaf.min_leaf = i;
    }

    // reverse union over tracked ids; each component carries its current handle
    std::vector<int> uf(h.m + 1), handle(h.m + 1), comp_size(h.m + 1, 1);
    std::iota(uf.begin(), uf.end(), 0);
    for (int i = 1; i <= h.m; ++i) handle[i] = g.leaf_handle(i);
    auto find = [&](int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };

    for (int ri = static_cast<int>(h.splits.size()) - 1; ri >= 0; --ri) {
        const SplitRecord& rec = h.splits[ri];
        std::vector<int> roots{find(rec.remainder_rep)};
        int expected = comp_size[roots[0]];
        for (const auto& small : rec.smalls) {
            int r = find(small.front());
            require(comp_size[r] == static_cast<int>(small.size()), errc::incomplete_history,
                    "split record does not match the later refinements");
            roots.push_back(r);
            expected += comp_size[r];
        }
        GenealogyTree::Node node;
        node.time = rec.t;
        node.event = rec.event;
        if (rec.event >= 0 && rec.event < static_cast<int>(h.events.size())) {
            const CutEvent& ev = h.events[rec.event];
            node.hub_cut = ev.is_hub;
            node.hub_theta_index = ev.hub_theta_index;
        }
        node.children.reserve(roots.size());
        for (int r : roots) node.children.push_back(handle[r]);
        std::sort(node.children.begin(), node.children.end(),
                  [&](int a, int b) { return g.nodes[a].min_leaf < g.nodes[b].min_leaf; });
        int id = static_cast<int>(g.nodes.size());
        node.block_size = expected;
        node.min_leaf = g.nodes[node.children.front()].min_leaf;
        for (int ch : node.children) {
            g.nodes[ch].parent = id;
            node.min_leaf = std::min(node.min_leaf, g.nodes[ch].min_leaf);
        }
        g.nodes.push_back(std::move(node));
        int acc = roots[0];
        for (std::size_t i = 1; i < roots.size(); ++i) {
            int ra = find(acc), rb = find(roots[i]);
            uf[rb] = ra;
            comp_size[ra] += comp_size[rb];
            acc = ra;
        }
        handle[find(acc)] = id;
    }
    int top = find(1);
    require(comp_size[top] == h.m, errc::incomplete_history,
            "refinements do not connect all tracked leaves");
    g.root = handle[top];
    require(!g.is_leaf(g.root), errc::incomplete_history, "history contains no refinement");

    // heights and depths, root downward; leaves inherit their parent's height
    // (their integral is truncated at isolation)
    std::vector<int> stack{g.root};
    g.nodes[g.root].depth = 0;
    g.nodes[g.root].height = g.nodes[g.root].time; // block mass 1 up to the first split
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int ch : g.nodes[v].children) {
            auto& c = g.nodes[ch];
            c.depth = g.nodes[v].depth + 1;
            if (g.is_leaf(ch)) {
                c.time = g.nodes[v].time;
                c.height = g.nodes[v].height;
            } else {
                c.height = g.nodes[v].height +
                           (c.time - g.nodes[v].time) * (static_cast<double>(c.block_size) / g.m);
                stack.push_back(ch);
            }
        }
    }
    return g;
}

DeltaMatrix delta_matrix(const FragHistory& h) {
    GenealogyTree g = genealogy(h);
    DeltaMatrix d;
    d.m = h.m;
    d.root_row.resize(h.m);
    d.isolation.resize(h.m);
    d.bias_bound.resize(h.m);
    for (int i = 1; i <= h.m; ++i) {
        d.root_row[i - 1] = g.leaf_height(i);
        d.isolation[i - 1] = g.isolation_time(i);
        d.bias_bound[i - 1] = (h.tau_full - d.isolation[i - 1]) / h.m;
    }
    d.pair_.assign(static_cast<std::size_t>(h.m) * h.m, 0.0);
    for (int i = 1; i <= h.m; ++i)
        for (int j = i + 1; j <= h.m; ++j) {
            int l = g.lca(g.leaf_handle(i), g.leaf_handle(j));
            double v = g.leaf_height(i) + g.leaf_height(j) - 2.0 * g.nodes[l].height;
            d.pair_[(i - 1) * static_cast<std::size_t>(h.m) + (j - 1)] = v;
            d.pair_[(j - 1) * static_cast<std::size_t>(h.m) + (i - 1)] = v;
        }
    return d;
}

double four_point_violation(const DeltaMatrix& d, long long budget, Rng& rng, bool* exhaustive) {
    const int n = d.m + 1; // index 0 is the cut-tree root
    auto dist = [&](int a, int b) -> double {
        if (a == b) return 0.0;
        if (a == 0) return d.root(b);
        if (b == 0) return d.root(a);
        return d.at(a, b);
    };
    auto violation = [&](int a, int b, int c, int e) {
        double s1 = dist(a, b) + dist(c, e);
        double s2 = dist(a, c) + dist(b, e);
        double s3 = dist(a, e) + dist(b, c);
        double hi = std::max({s1, s2, s3});
        double mid = s1 + s2 + s3 - hi - std::min({s1, s2, s3});
        return hi - mid; // four-point condition: the two largest sums agree
    };
    long long quadruples = 1;
    for (int i = 0; i < 4; ++i) quadruples = quadruples * (n - i) / (i + 1);
    double worst = 0.0;
    if (quadruples <= budget) {
        if (exhaustive) *exhaustive = true;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c)
                    for (int e = c + 1; e < n; ++e)
                        worst = std::max(worst, violation(a, b, c, e));
    } else {
        if (exhaustive) *exhaustive = false;
        for (long long s = 0; s < budget; ++s) {
            int idx[4];
            for (int t = 0; t < 4; ++t) {
                bool fresh;
                do {
                    idx[t] = static_cast<int>(rng.below(n));
                    fresh = true;
                    for (int q = 0; q < t; ++q) fresh &= idx[q] != idx[t];
                } while (!fresh);
            }
            worst = std::max(worst, violation(idx[0], idx[1], idx[2], idx[3]));
        }
    }
    return worst;
}

std::vector<PhiEstimate> phi_local_time_check(const GenealogyTree& g, const ThetaSpec& spec,
                                              const std::vector<int>& k_schedule) {
    bool any_hub = false;
    std::vector<PhiEstimate> out;
    for (int v = g.m; v < static_cast<int>(g.nodes.size()); ++v) {
        const auto& node = g.nodes[v];
        PhiEstimate est;
        est.node = v;
        est.hub_cut = node.hub_cut;
        est.hub_theta_index = node.hub_theta_index;
        if (node.hub_cut) {
            any_hub = true;
            est.theta = spec.theta[node.hub_theta_index - 1];
        }
        std::vector<int> child_min;
        for (int ch : node.children) child_min.push_back(g.nodes[ch].min_leaf);
        std::sort(child_min.begin(), child_min.end());
        for (int k : k_schedule) {
            if (node.min_leaf > k) {
                est.estimates.push_back(0.0); // node not yet in the spanning subtree
                continue;
            }
            auto it = std::upper_bound(child_min.begin(), child_min.end(), k);
            int deg = 1 + static_cast<int>(it - child_min.begin());
            est.estimates.push_back(deg / psi_inv(spec, static_cast<double>(k)));
        }
        out.push_back(std::move(est));
    }
    require(any_hub, errc::no_hub_cuts, "no hub-cut nodes in the genealogy");
    return out;
}

namespace {

// oriented walk through the spanned graph from leaf i to leaf j
struct PathGeometry {
    std::vector<int> edges;        // edge ids in walk order
    std::vector<char> forward;     // walk goes lower -> upper on this edge
    std::vector<double> arc_start; // arc position of each edge's walk start
    std::vector<int> nodes;        // node ids, size edges+1
    double total = 0.0;

    int edge_slot(int e) const {
        for (std::size_t r = 0; r < edges.size(); ++r)
            if (edges[r] == e) return static_cast<int>(r);
        return -1;
    }
};

PathGeometry graph_path(const FragHistory& h, int i, int j) {
    require(h.has_geometry, errc::inconsistent_inputs,
            "history was loaded without geometry; rerun in-process");
    require(i >= 1 && i <= h.m && j >= 1 && j <= h.m, errc::untracked_leaf,
            "leaf ids must be tracked");
    require(i != j, errc::same_vertex, "need two distinct leaves");
    const SpannedGraph& g = h.graph;
    int src = h.leaf_node[i], dst = h.leaf_node[j];
    std::vector<int> via_edge(g.nodes.size(), -1), prev(g.nodes.size(), -1);
    std::vector<int> stack{src};
    prev[src] = src;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == dst) break;
        for (int e : g.incident[v]) {
            int u = g.edges[e].lower == v ? g.edges[e].upper : g.edges[e].lower;
            if (prev[u] >= 0) continue;
            prev[u] = v;
            via_edge[u] = e;
            stack.push_back(u);
        }
    }
    require(prev[dst] >= 0, errc::inconsistent_inputs, "leaves not connected in the graph");
    PathGeometry p;
    std::vector<int> rev_nodes;
    for (int v = dst; v != src; v = prev[v]) {
        rev_nodes.push_back(v);
        p.edges.push_back(via_edge[v]);
    }
    rev_nodes.push_back(src);
    std::reverse(rev_nodes.begin(), rev_nodes.end());
    std::reverse(p.edges.begin(), p.edges.end());
    p.nodes = std::move(rev_nodes);
    p.arc_start.resize(p.edges.size());
    double arc = 0.0;
    for (std::size_t r = 0; r < p.edges.size(); ++r) {
        const auto& e = g.edges[p.edges[r]];
        p.forward.push_back(e.lower == p.nodes[r]);
        p.arc_start[r] = arc;
        arc += e.len;
    }
    p.total = arc;
    return p;
}

// arc position of an event on the path, or -1 when off-path; hub events
// resolve to the interior node's position
double event_arc(const PathGeometry& p, const SpannedGraph& g, const CutEvent& ev) {
    if (ev.is_hub) {
        for (std::size_t r = 1; r + 1 < p.nodes.size(); ++r)
            if (p.nodes[r] == ev.node) return p.arc_start[r];
        return -1.0;
    }
    int slot = p.edge_slot(ev.edge);
    if (slot < 0) return -1.0;
    const auto& e = g.edges[ev.edge];
    double off = ev.coord - e.lo; // distance from the lower end
    return p.arc_start[slot] + (p.forward[slot] ? off : e.len - off);
}

} // namespace

double brownian_reconstruct(const FragHistory& h, int i, int j, double t, double beta) {
    require(beta > 0.0, errc::zero_beta, "beta must be positive");
    require(t > 0.0, errc::inconsistent_inputs, "t must be positive");
    require(t <= h.horizon * (1.0 + 1e-12), errc::inconsistent_inputs,
            "history events were only generated up to the horizon");
    PathGeometry p = graph_path(h, i, j);
    std::vector<char> on_path(h.graph.edges.size(), 0);
    for (int e : p.edges) on_path[e] = 1;
    long long count = 0;
    for (const auto& ev : h.events) {
        if (ev.t > t) break;
        if (!ev.is_hub && on_path[ev.edge]) ++count;
    }
    return static_cast<double>(count) / (beta * t);
}

std::vector<double> routing_delta(const FragHistory& h, int i, int j, const std::string& u,
                                  const std::vector<int>& kset) {
    GenealogyTree g = genealogy(h);
    // canonical form: r_{u0} = r_u
    std::string addr = u;
    while (addr.size() > 1 && addr.back() == '0') addr.pop_back();
    require(!addr.empty() && addr.find_first_not_of("01") == std::string::npos,
            errc::unresolved_address, "address must be a nonempty binary string");

    auto leaf_delta = [&](int leaf) {
        std::vector<double> out;
        for (int k : kset) {
            if (k == leaf) {
                out.push_back(0.0);
                continue;
            }
            int l = g.lca(g.leaf_handle(leaf), g.leaf_handle(k));
            out.push_back(g.leaf_height(leaf) + g.leaf_height(k) - 2.0 * g.nodes[l].height);
        }
        return out;
    };
    if (addr == "0") return leaf_delta(i);
    if (addr == "1") return leaf_delta(j);

    PathGeometry p = graph_path(h, i, j);
    const SpannedGraph& gr = h.graph;

    // replay the cuts on the path, descending along the address prefix
    double end0 = 0.0, end1 = p.total; // arc positions of the current sub-path pair
    std::size_t consumed = 0;          // bits of addr fixed so far
    const std::string prefix = addr.substr(0, addr.size() - 1); // ends with the side bit
    double cut_arc = -1.0;
    int cut_event = -1;
    for (std::size_t ei = 0; ei < h.events.size() && cut_event < 0; ++ei) {
        const CutEvent& ev = h.events[ei];
        double arc = event_arc(p, gr, ev);
        if (arc < 0.0) continue;
        double lo = std::min(end0, end1), hi = std::max(end0, end1);
        if (arc <= lo || arc >= hi) continue; // outside the live sub-path
        if (consumed == prefix.size()) {
            cut_arc = arc;
            cut_event = static_cast<int>(ei);
            break;
        }
        // descend: bit 0 keeps the end0 side of the split, bit 1 the end1 side
        if (prefix[consumed] == '0')
            end1 = arc;
        else
            end0 = arc;
        ++consumed;
    }
    require(cut_event >= 0, errc::unresolved_address,
            "no cut resolves address " + addr + " within the history");

    // y_u = copy of the cut location towards the q end of the final sub-path
    const char q = prefix.back();
    const double target_end = (q == '0') ? end0 : end1;
    const bool towards_smaller_arc = target_end < cut_arc;

    // locate the marker piece as (edge, coordinate, side)
    const CutEvent& cev = h.events[cut_event];
    int marker_edge = -1;
    double marker_coord = 0.0;
    int marker_side = 0;
    if (!cev.is_hub) {
        int slot = p.edge_slot(cev.edge);
        marker_edge = cev.edge;
        marker_coord = cev.coord;
        // side -1 = smaller coordinate within the edge
        marker_side = (towards_smaller_arc == static_cast<bool>(p.forward[slot])) ? -1 : +1;
    } else {
        int rh = -1;
        for (std::size_t r = 1; r + 1 < p.nodes.size(); ++r)
            if (p.nodes[r] == cev.node) rh = static_cast<int>(r);
        require(rh > 0, errc::unresolved_address, "hub copy is not interior to the path");
        int eslot = towards_smaller_arc ? rh - 1 : rh;
        marker_edge = p.edges[eslot];
        bool at_lower = gr.edges[marker_edge].lower == cev.node;
        marker_coord = at_lower ? gr.edges[marker_edge].lo : gr.edges[marker_edge].hi;
        marker_side = at_lower ? +1 : -1;
    }

    // rerun the reverse union over graph pieces, tracking the marker component.
    // join_time: -1 = shares the marker's terminal block (never separates),
    // +inf = not reached yet, else the forward separation time.
    std::vector<double> join_time(h.m + 1, kInf);
    struct Traj {
        double t;
        int size;
    };
    std::vector<Traj> traj;
    {
        std::vector<std::vector<double>> edge_cuts(gr.edges.size());
        std::vector<char> node_cut(gr.nodes.size(), 0);
        for (const auto& ev : h.events) {
            if (ev.is_hub)
                node_cut[ev.node] = 1;
            else
                edge_cuts[ev.edge].push_back(ev.coord);
        }
        std::vector<int> piece_start(gr.edges.size() + 1, 0);
        for (std::size_t e = 0; e < gr.edges.size(); ++e) {
            std::sort(edge_cuts[e].begin(), edge_cuts[e].end());
            piece_start[e + 1] = piece_start[e] + static_cast<int>(edge_cuts[e].size()) + 1;
        }
        int node_base = piece_start.back();
        int total = node_base + static_cast<int>(gr.nodes.size());
        std::vector<int> uf(total);
        std::iota(uf.begin(), uf.end(), 0);
        std::vector<std::vector<int>> members(total);
        auto find = [&](int x) {
            while (uf[x] != x) x = uf[x] = uf[uf[x]];
            return x;
        };
        for (std::size_t v = 0; v < gr.nodes.size(); ++v)
            if (gr.nodes[v].leaf > 0) members[node_base + v] = {gr.nodes[v].leaf};

        auto piece_at = [&](int e, double c, int side) {
            const auto& cuts = edge_cuts[e];
            auto it = (side < 0) ? std::lower_bound(cuts.begin(), cuts.end(), c)
                                 : std::upper_bound(cuts.begin(), cuts.end(), c);
            return piece_start[e] + static_cast<int>(it - cuts.begin());
        };
        const int marker = piece_at(marker_edge, marker_coord, marker_side);

        auto unite_into = [&](int a, int b) { // b survives
            uf[a] = b;
            members[b].insert(members[b].end(), members[a].begin(), members[a].end());
            members[a].clear();
        };
        for (std::size_t v = 0; v < gr.nodes.size(); ++v) {
            if (node_cut[v]) continue;
            for (int e : gr.incident[v]) {
                int pc = (gr.edges[e].lower == static_cast<int>(v)) ? piece_start[e]
                                                                    : piece_start[e + 1] - 1;
                int ra = find(pc), rb = find(node_base + static_cast<int>(v));
                if (ra != rb) unite_into(ra, rb);
            }
        }
        for (int x : members[find(marker)]) join_time[x] = -1.0;
        traj.push_back(Traj{kInf, static_cast<int>(members[find(marker)].size())});

        for (int ei = static_cast<int>(h.events.size()) - 1; ei >= 0; --ei) {
            const CutEvent& ev = h.events[ei];
            std::vector<int> parts;
            if (ev.is_hub) {
                for (int e : gr.incident[ev.node]) {
                    if (gr.edges[e].lower == ev.node) parts.push_back(piece_start[e]);
                    if (gr.edges[e].upper == ev.node) parts.push_back(piece_start[e + 1] - 1);
                }
                parts.push_back(node_base + ev.node);
            } else {
                parts = {piece_at(ev.edge, ev.coord, -1), piece_at(ev.edge, ev.coord, +1)};
            }
            std::vector<int> roots;
            for (int pc : parts) {
                int r = find(pc);
                if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
            }
            int mroot = find(marker);
            bool touches = std::find(roots.begin(), roots.end(), mroot) != roots.end();
            int before = static_cast<int>(members[mroot].size());
            int acc = roots[0];
            for (std::size_t r = 1; r < roots.size(); ++r) {
                int ra = find(acc), rb = find(roots[r]);
                if (ra == rb) continue;
                if (members[ra].size() > members[rb].size()) std::swap(ra, rb);
                unite_into(ra, rb);
                acc = rb;
            }
            if (touches) {
                int now = find(marker);
                if (static_cast<int>(members[now].size()) != before) {
                    for (int x : members[now])
                        if (join_time[x] == kInf) join_time[x] = ev.t;
                    traj.push_back(Traj{ev.t, static_cast<int>(members[now].size())});
                }
            }
        }
    }

    // forward mass segments of the marker block: traj (reversed to ascending
    // change times) gives size s_r on [t_{r-1}, t_r)
    std::reverse(traj.begin(), traj.end());
    std::vector<std::pair<double, double>> segs; // (start, mass)
    double prev_t = 0.0;
    for (const auto& tr : traj) {
        segs.emplace_back(prev_t, static_cast<double>(tr.size) / h.m);
        prev_t = tr.t;
    }
    const double settle = (traj.size() >= 2) ? traj[traj.size() - 2].t : 0.0;

    auto marker_integral = [&](double from) {
        double total = 0.0;
        for (std::size_t r = 0; r < segs.size(); ++r) {
            double lo = std::max(segs[r].first, from);
            double hi = (r + 1 < segs.size()) ? segs[r + 1].first : settle;
            hi = std::min(hi, settle);
            if (hi > lo) total += (hi - lo) * segs[r].second;
        }
        return total;
    };

    std::vector<double> out;
    for (int k : kset) {
        require(k >= 1 && k <= h.m, errc::untracked_leaf, "kset entries must be tracked ids");
        double tau = join_time[k];
        require(tau != kInf, errc::incomplete_history, "leaf never reached the marker block");
        if (tau < 0.0) { // shares the terminal block: below resolution
            out.push_back(0.0);
            continue;
        }
        double side_u = marker_integral(tau);
        double side_k =
            g.lineage_integral(k, g.isolation_time(k)) - g.lineage_integral(k, tau);
        out.push_back(side_u + side_k);
    }
    return out;
}

double tau_integral(const GenealogyTree& g, int node) {
    require(node >= 0 && node < static_cast<int>(g.nodes.size()), errc::node_not_internal,
            "node out of range");
    require(!g.is_leaf(node), errc::node_not_internal, "leaves have no cut time");
    double total = 0.0;
    int cur = node;
    while (g.nodes[cur].parent >= 0) {
        const auto& nd = g.nodes[cur];
        const auto& pa = g.nodes[nd.parent];
        double mass_above = static_cast<double>(nd.block_size) / g.m;
        double edge_len = (nd.time - pa.time) * mass_above;
        total += edge_len / mass_above;
        cur = nd.parent;
    }
    return total;
}

} // namespace icrt
