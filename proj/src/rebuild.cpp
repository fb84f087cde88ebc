#include "icrt/rebuild.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "icrt/errors.hpp"

namespace icrt {

UnrootedTree UnrootedTree::from_rooted(const RootedLabeledTree& t) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(t.n - 1);
    for (int v = 1; v <= t.n; ++v)
        if (v != t.root) edges.emplace_back(std::min(v, t.parent[v]), std::max(v, t.parent[v]));
    return from_edges(t.n, std::move(edges));
}

UnrootedTree UnrootedTree::from_edges(int n, std::vector<std::pair<int, int>> edges) {
    for (auto& e : edges)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(edges.begin(), edges.end());
    return UnrootedTree{n, std::move(edges)};
}

UnrootedTree rebuild(const DiscreteCutTree& c, const TraceMap& tr) {
    const int n = c.tree.n;
    require(static_cast<int>(tr.traces.size()) == n + 1, errc::incomplete_traces,
            "trace map size");
    auto child_counts = c.tree.child_counts();
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n - 1);
    for (int v = 1; v <= n; ++v) {
        require(static_cast<int>(tr.traces[v].size()) == child_counts[v], errc::incomplete_traces,
                "vertex " + std::to_string(v) + " needs one trace per subtree");
        for (int u : tr.traces[v]) {
            require(u >= 1 && u <= n && u != v, errc::incomplete_traces, "bad trace vertex");
            edges.emplace_back(v, u);
        }
    }
    // n-1 edges by construction; spanning + acyclic is the real check
    std::vector<int> uf(n + 1);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    for (auto [a, b] : edges) {
        int ra = find(a), rb = find(b);
        require(ra != rb, errc::result_not_a_tree, "trace edges contain a cycle");
        uf[ra] = rb;
    }
    return UnrootedTree::from_edges(n, std::move(edges));
}

namespace {

struct CutTreeIndex {
    std::vector<int> depth;
    std::vector<int> tin, tout;
    std::vector<std::vector<int>> children;
    const DiscreteCutTree& c;

    explicit CutTreeIndex(const DiscreteCutTree& cut) : c(cut) {
        const int n = c.tree.n;
        children.assign(n + 1, {});
        for (int v = 1; v <= n; ++v)
            if (v != c.tree.root) children[c.tree.parent[v]].push_back(v);
        depth.assign(n + 1, 0);
        tin.assign(n + 1, 0);
        tout.assign(n + 1, 0);
        int timer = 0;
        std::vector<std::pair<int, int>> stack{{c.tree.root, 0}};
        while (!stack.empty()) {
            auto& [v, idx] = stack.back();
            if (idx == 0) tin[v] = timer++;
            if (idx < static_cast<int>(children[v].size())) {
                int ch = children[v][idx++];
                depth[ch] = depth[v] + 1;
                stack.emplace_back(ch, 0);
            } else {
                tout[v] = timer;
                stack.pop_back();
            }
        }
    }

    bool ancestor(int a, int d) const { return tin[a] <= tin[d] && tin[d] < tout[a]; }

    int mrca(int a, int b) const {
        while (!ancestor(a, b)) a = c.tree.parent[a];
        return a;
    }

    // child of v whose subtree contains u (pre: v proper ancestor of u)
    int child_towards(int v, int u) const {
        for (int ch : children[v])
            if (ancestor(ch, u)) return ch;
        fail(errc::inconsistent_inputs, "no child towards target");
    }
};

} // namespace

RoutePath route_path(const DiscreteCutTree& c, const TraceMap& tr, int w1, int w2) {
    require(w1 != w2, errc::same_vertex, "w1 and w2 must differ");
    const int n = c.tree.n;
    require(w1 >= 1 && w1 <= n && w2 >= 1 && w2 <= n, errc::inconsistent_inputs,
            "vertex out of range");
    CutTreeIndex idx(c);

    // ranked child order must match the trace map
    auto trace_in_subtree_towards = [&](int v, int target) {
        int ch = idx.child_towards(v, target);
        const auto& ranked_traces = tr.traces[v];
        // the trace lying in ch's subtree
        for (int u : ranked_traces)
            if (idx.ancestor(ch, u)) return u;
        fail(errc::incomplete_traces, "no trace for the subtree towards target");
    };

    RoutePath out;
    std::deque<std::tuple<std::string, int, int>> frontier; // (address, a, b)
    frontier.emplace_back("", w1, w2);
    std::vector<std::pair<int, int>> edges;
    while (!frontier.empty()) {
        auto [addr, a, b] = frontier.front();
        frontier.pop_front();
        if (a == b) continue;
        int m = idx.mrca(a, b);
        out.cuts.emplace_back(addr, m);
        if (m != a && m != b) {
            int ta = trace_in_subtree_towards(m, a);
            int tb = trace_in_subtree_towards(m, b);
            edges.emplace_back(m, ta);
            edges.emplace_back(m, tb);
            out.routings.emplace_back(addr + "01", ta);
            out.routings.emplace_back(addr + "11", tb);
            frontier.emplace_back(addr + "0", a, ta);
            frontier.emplace_back(addr + "1", b, tb);
        } else if (m == a) {
            int tb = trace_in_subtree_towards(a, b);
            edges.emplace_back(a, tb);
            out.routings.emplace_back(addr + "11", tb);
            frontier.emplace_back(addr + "1", b, tb);
        } else { // m == b
            int ta = trace_in_subtree_towards(b, a);
            edges.emplace_back(b, ta);
            out.routings.emplace_back(addr + "01", ta);
            frontier.emplace_back(addr + "0", a, ta);
        }
    }

    // order the recovered edges by walking from w1
    std::map<int, std::vector<int>> adj;
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    int prev = 0, cur = w1;
    while (cur != w2) {
        int next = -1;
        for (int u : adj[cur])
            if (u != prev) {
                next = u;
                break;
            }
        require(next != -1, errc::inconsistent_inputs, "recovered edges do not form the path");
        out.edges.emplace_back(cur, next);
        prev = cur;
        cur = next;
    }
    require(out.edges.size() == edges.size(), errc::inconsistent_inputs,
            "recovered edges do not form the path");
    return out;
}

} // namespace icrt
