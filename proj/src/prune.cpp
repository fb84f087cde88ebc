#include "icrt/prune.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "icrt/errors.hpp"

namespace icrt {

RemovalOrder RemovalOrder::from_times(std::vector<double> times) {
    const int n = static_cast<int>(times.size()) - 1;
    RemovalOrder ord;
    ord.times = std::move(times);
    ord.order.resize(n);
    std::iota(ord.order.begin(), ord.order.end(), 1);
    std::sort(ord.order.begin(), ord.order.end(),
              [&](int a, int b) { return ord.times[a] < ord.times[b]; });
    for (int i = 1; i < n; ++i)
        require(ord.times[ord.order[i]] != ord.times[ord.order[i - 1]], errc::time_collision,
                "tied removal times");
    return ord;
}

RemovalOrder sample_order(const RootedLabeledTree& t, const ProbVector& p, Rng& rng) {
    require(t.n == p.n(), errc::size_mismatch, "tree and p sizes differ");
    std::vector<double> times(t.n + 1, 0.0);
    for (int v = 1; v <= t.n; ++v) times[v] = rng.exponential(p.p[v - 1]);
    return RemovalOrder::from_times(std::move(times));
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
};

} // namespace

DiscreteCutTree cut_tree(const RootedLabeledTree& t, const RemovalOrder& ord) {
    const int n = t.n;
    require(static_cast<int>(ord.order.size()) == n, errc::size_mismatch,
            "order does not cover the vertex set");
    auto adj = t.adjacency();
    std::vector<int> rank(n + 1); // removal position of each vertex
    for (int i = 0; i < n; ++i) rank[ord.order[i]] = i;

    DiscreteCutTree c;
    c.tree.n = n;
    c.tree.root = ord.order[0];
    c.tree.parent.assign(n + 1, 0);
    c.provenance.assign(n + 1, {});

    // Activate vertices from last removed to first; each activation merges the
    // neighbouring already-active components, whose cut-tree roots (their
    // earliest-removed vertices) become children of the activated vertex.
    UnionFind uf(n + 1);
    std::vector<char> active(n + 1, 0);
    std::vector<int> comp_root(n + 1, 0);           // earliest-removed vertex per component
    std::vector<std::vector<int>> members(n + 1);   // component vertex lists, small-to-large
    for (int i = n - 1; i >= 0; --i) {
        int v = ord.order[i];
        active[v] = 1;
        comp_root[v] = v;
        members[v] = {v};
        for (int u : adj[v]) {
            if (!active[u]) continue;
            int ru = uf.find(u);
            int rv = uf.find(v);
            if (ru == rv) continue;
            c.tree.parent[comp_root[ru]] = v;
            if (members[ru].size() > members[rv].size()) std::swap(ru, rv);
            members[rv].insert(members[rv].end(), members[ru].begin(), members[ru].end());
            members[ru].clear();
            uf.parent[ru] = rv;
            comp_root[rv] = v; // v is the earliest removed in the union
        }
        int r = uf.find(v);
        c.provenance[v] = members[r];
        std::sort(c.provenance[v].begin(), c.provenance[v].end());
    }
    return c;
}

TraceMap traces(const RootedLabeledTree& t, const ProbVector& p, const RemovalOrder& ord,
                const DiscreteCutTree& c) {
    const int n = t.n;
    require(p.n() == n, errc::size_mismatch, "p size");
    require(c.tree.n == n, errc::inconsistent_inputs, "cut tree size");
    require(c.tree.root == ord.order[0], errc::inconsistent_inputs,
            "cut tree root does not match the removal order");

    // Euler intervals, subtree masses and min labels over the cut tree.
    std::vector<std::vector<int>> children(n + 1);
    for (int v = 1; v <= n; ++v)
        if (v != c.tree.root) children[c.tree.parent[v]].push_back(v);
    std::vector<int> tin(n + 1), tout(n + 1), min_label(n + 1), order_stack;
    std::vector<double> mass(n + 1, 0.0);
    int timer = 0;
    // iterative post-order
    std::vector<std::pair<int, int>> stack{{c.tree.root, 0}};
    while (!stack.empty()) {
        auto& [v, idx] = stack.back();
        if (idx == 0) {
            tin[v] = timer++;
            mass[v] = p.p[v - 1];
            min_label[v] = v;
        }
        if (idx < static_cast<int>(children[v].size())) {
            stack.emplace_back(children[v][idx++], 0);
        } else {
            tout[v] = timer;
            if (v != c.tree.root) {
                int pa = c.tree.parent[v];
                mass[pa] += mass[v];
                min_label[pa] = std::min(min_label[pa], min_label[v]);
            }
            stack.pop_back();
        }
    }

    auto in_subtree = [&](int u, int root) { return tin[root] <= tin[u] && tin[u] < tout[root]; };

    TraceMap tm;
    tm.traces.assign(n + 1, {});
    auto adj = t.adjacency();
    for (int v = 1; v <= n; ++v) {
        // child subtrees of v in C, ranked by (p-mass desc, min label asc)
        std::vector<int> ranked = children[v];
        std::sort(ranked.begin(), ranked.end(), [&](int a, int b) {
            if (mass[a] != mass[b]) return mass[a] > mass[b];
            return min_label[a] < min_label[b];
        });
        tm.traces[v].assign(ranked.size(), 0);
        for (int u : adj[v]) {
            if (ord.times[u] <= ord.times[v]) continue; // edge already gone at v's removal
            for (std::size_t i = 0; i < ranked.size(); ++i)
                if (in_subtree(u, ranked[i])) {
                    require(tm.traces[v][i] == 0, errc::inconsistent_inputs,
                            "two traces in one subtree");
                    tm.traces[v][i] = u;
                    break;
                }
        }
        for (int u : tm.traces[v])
            require(u != 0, errc::inconsistent_inputs, "missing trace for vertex " +
                    std::to_string(v));
    }
    return tm;
}

namespace {

// vertices on the path u..v inclusive
std::vector<int> path_vertices(const RootedLabeledTree& t, int u, int v) {
    auto adj = t.adjacency();
    std::vector<int> prev(t.n + 1, -1);
    std::queue<int> q;
    q.push(u);
    prev[u] = u;
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        if (x == v) break;
        for (int y : adj[x])
            if (prev[y] < 0) {
                prev[y] = x;
                q.push(y);
            }
    }
    std::vector<int> path;
    for (int x = v; x != u; x = prev[x]) path.push_back(x);
    path.push_back(u);
    return path;
}

} // namespace

int tree_distance(const RootedLabeledTree& t, int u, int v) {
    return static_cast<int>(path_vertices(t, u, v).size()) - 1;
}

int record_count(const RootedLabeledTree& t, const RemovalOrder& ord, int v) {
    int count = 0;
    for (int u = 1; u <= t.n; ++u) {
        bool record = true;
        for (int w : path_vertices(t, u, v))
            if (w != u && ord.times[w] < ord.times[u]) {
                record = false;
                break;
            }
        count += record;
    }
    return count;
}

int pair_record_distance(const RootedLabeledTree& t, const RemovalOrder& ord, int u, int v) {
    require(u != v, errc::same_vertex, "u and v must differ");
    double sep = std::numeric_limits<double>::infinity();
    for (int w : path_vertices(t, u, v)) sep = std::min(sep, ord.times[w]);
    auto post_sep_records = [&](int target) {
        int count = 0;
        for (int w = 1; w <= t.n; ++w) {
            if (ord.times[w] <= sep) continue;
            bool record = true;
            for (int x : path_vertices(t, w, target))
                if (x != w && ord.times[x] < ord.times[w]) {
                    record = false;
                    break;
                }
            count += record;
        }
        return count;
    };
    return post_sep_records(u) + post_sep_records(v);
}

namespace {

// DFS from v yielding, for every u, the minimal removal time strictly between
// u and v on their path (infinity when adjacent-or-equal path is just {u,v}
// minus endpoints is empty).
void path_interior_minima(const std::vector<std::vector<int>>& adj,
                          const std::vector<double>& times, int v,
                          std::vector<double>& out) {
    const double inf = std::numeric_limits<double>::infinity();
    std::fill(out.begin(), out.end(), inf);
    // stack holds (vertex, parent, min time on path v..parent(vertex) inclusive of
    // interior vertices, i.e. excluding the endpoints u and v themselves)
    std::vector<std::tuple<int, int, double>> stack{{v, 0, inf}};
    while (!stack.empty()) {
        auto [x, from, interior_min] = stack.back();
        stack.pop_back();
        out[x] = interior_min;
        double next_min = (x == v) ? inf : std::min(interior_min, times[x]);
        for (int y : adj[x])
            if (y != from) stack.emplace_back(y, x, next_min);
    }
}

} // namespace

std::vector<int> record_counts(const RootedLabeledTree& t, const RemovalOrder& ord) {
    const int n = t.n;
    auto adj = t.adjacency();
    std::vector<int> counts(n + 1, 0);
    std::vector<double> interior(n + 1);
    for (int v = 1; v <= n; ++v) {
        path_interior_minima(adj, ord.times, v, interior);
        int c = 0;
        for (int u = 1; u <= n; ++u)
            // u is a record for v iff nothing strictly between u and v is removed
            // earlier, and v itself (an endpoint of the path) is not either
            if (ord.times[u] < interior[u] && (u == v || ord.times[u] < ord.times[v])) ++c;
        counts[v] = c;
    }
    return counts;
}

std::vector<std::vector<int>> pair_record_distances(const RootedLabeledTree& t,
                                                    const RemovalOrder& ord) {
    const int n = t.n;
    auto adj = t.adjacency();
    const double inf = std::numeric_limits<double>::infinity();

    // per-vertex sorted record times
    std::vector<std::vector<double>> rec_times(n + 1);
    std::vector<double> interior(n + 1);
    // separation time per pair: minimum removal time on the inclusive path
    std::vector<std::vector<double>> sep(n + 1, std::vector<double>(n + 1, inf));
    for (int v = 1; v <= n; ++v) {
        path_interior_minima(adj, ord.times, v, interior);
        for (int u = 1; u <= n; ++u) {
            if (ord.times[u] < interior[u] && (u == v || ord.times[u] < ord.times[v]))
                rec_times[v].push_back(ord.times[u]);
            sep[v][u] = std::min(interior[u], std::min(ord.times[u], ord.times[v]));
        }
        std::sort(rec_times[v].begin(), rec_times[v].end());
    }
    auto count_after = [&](int v, double cutoff) {
        const auto& r = rec_times[v];
        return static_cast<int>(r.end() - std::upper_bound(r.begin(), r.end(), cutoff));
    };
    std::vector<std::vector<int>> d(n + 1, std::vector<int>(n + 1, 0));
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v) {
            d[u][v] = d[v][u] = count_after(u, sep[u][v]) + count_after(v, sep[u][v]);
        }
    return d;
}

} // namespace icrt
