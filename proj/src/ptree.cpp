#include "icrt/ptree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "icrt/errors.hpp"

namespace icrt {

ProbVector ProbVector::validated(std::vector<double> p) {
    require(!p.empty(), errc::size_mismatch, "empty probability vector");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        require(p[i] > 0.0, errc::nonpositive_theta_entry,
                "p[" + std::to_string(i) + "] must be > 0");
        if (i > 0)
            require(p[i] <= p[i - 1], errc::unsorted_theta, "p must be nonincreasing");
        sum += p[i];
    }
    require(std::abs(sum - 1.0) <= 1e-12, errc::size_mismatch,
            "p must sum to 1, got " + std::to_string(sum));
    return ProbVector{std::move(p)};
}

ProbVector ProbVector::uniform(int n) {
    return ProbVector{std::vector<double>(n, 1.0 / n)};
}

std::vector<int> RootedLabeledTree::child_counts() const {
    std::vector<int> d(n + 1, 0);
    for (int v = 1; v <= n; ++v)
        if (v != root) ++d[parent[v]];
    return d;
}

std::vector<std::vector<int>> RootedLabeledTree::adjacency() const {
    std::vector<std::vector<int>> adj(n + 1);
    for (int v = 1; v <= n; ++v)
        if (v != root) {
            adj[v].push_back(parent[v]);
            adj[parent[v]].push_back(v);
        }
    return adj;
}

void check_tree(const RootedLabeledTree& t) {
    require(t.n >= 1, errc::inconsistent_inputs, "empty tree");
    require(t.root >= 1 && t.root <= t.n, errc::inconsistent_inputs, "root out of range");
    require(static_cast<int>(t.parent.size()) == t.n + 1, errc::inconsistent_inputs,
            "parent array size");
    require(t.parent[t.root] == 0, errc::inconsistent_inputs, "root must have parent 0");
    // every non-root vertex must reach the root without revisiting
    for (int v = 1; v <= t.n; ++v) {
        if (v == t.root) continue;
        int u = v, steps = 0;
        while (u != t.root) {
            u = t.parent[u];
            require(u >= 1 && u <= t.n, errc::inconsistent_inputs, "parent out of range");
            require(++steps <= t.n, errc::inconsistent_inputs, "cycle in parent map");
        }
    }
}

double weight(const RootedLabeledTree& t, const ProbVector& p) {
    require(t.n == p.n(), errc::size_mismatch, "tree and p sizes differ");
    auto d = t.child_counts();
    double w = 1.0;
    for (int v = 1; v <= t.n; ++v) w *= std::pow(p.p[v - 1], d[v]);
    return w;
}

namespace {

// Standard sequence decode: degrees from label multiplicities, then repeatedly
// attach the smallest remaining leaf to the next code entry.
std::vector<std::pair<int, int>> decode_unrooted(int n, const std::vector<int>& code) {
    std::vector<std::pair<int, int>> edges;
    if (n == 1) return edges;
    std::vector<int> degree(n + 1, 1);
    for (int a : code) ++degree[a];
    std::set<int> leaves;
    for (int v = 1; v <= n; ++v)
        if (degree[v] == 1) leaves.insert(v);
    for (int a : code) {
        int leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.emplace_back(leaf, a);
        if (--degree[a] == 1) leaves.insert(a);
    }
    int u = *leaves.begin();
    int v = *std::next(leaves.begin());
    edges.emplace_back(u, v);
    return edges;
}

std::vector<int> encode_unrooted(const RootedLabeledTree& t) {
    int n = t.n;
    std::vector<int> code;
    if (n <= 2) return code;
    auto adj = t.adjacency();
    std::vector<int> degree(n + 1);
    for (int v = 1; v <= n; ++v) degree[v] = static_cast<int>(adj[v].size());
    std::vector<char> removed(n + 1, 0);
    std::set<int> leaves;
    for (int v = 1; v <= n; ++v)
        if (degree[v] == 1) leaves.insert(v);
    for (int step = 0; step < n - 2; ++step) {
        int leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        removed[leaf] = 1;
        int nb = 0;
        for (int u : adj[leaf])
            if (!removed[u]) nb = u;
        code.push_back(nb);
        if (--degree[nb] == 1) leaves.insert(nb);
    }
    return code;
}

RootedLabeledTree root_edges(int n, int root, const std::vector<std::pair<int, int>>& edges) {
    RootedLabeledTree t;
    t.n = n;
    t.root = root;
    t.parent.assign(n + 1, 0);
    std::vector<std::vector<int>> adj(n + 1);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> stack{root};
    std::vector<char> seen(n + 1, 0);
    seen[root] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                t.parent[u] = v;
                stack.push_back(u);
            }
    }
    return t;
}

} // namespace

std::uint64_t rooted_tree_count(int n) {
    std::uint64_t c = 1;
    for (int i = 0; i < n - 1; ++i) c *= static_cast<std::uint64_t>(n);
    return c;
}

std::vector<RootedLabeledTree> enumerate_rooted_trees(int n) {
    require(n >= 1, errc::inconsistent_inputs, "n >= 1 required");
    require(n <= 7, errc::n_too_large, "enumeration guarded to n <= 7");
    std::vector<RootedLabeledTree> out;
    out.reserve(rooted_tree_count(n));
    std::vector<int> code(std::max(0, n - 2), 1);
    for (int root = 1; root <= n; ++root) {
        std::fill(code.begin(), code.end(), 1);
        for (;;) {
            out.push_back(root_edges(n, root, decode_unrooted(n, code)));
            // odometer over [1..n]^(n-2)
            int pos = static_cast<int>(code.size()) - 1;
            while (pos >= 0 && code[pos] == n) code[pos--] = 1;
            if (pos < 0) break;
            ++code[pos];
        }
    }
    return out;
}

std::uint64_t rooted_tree_rank(const RootedLabeledTree& t) {
    std::uint64_t per_root = 1;
    for (int i = 0; i < t.n - 2; ++i) per_root *= static_cast<std::uint64_t>(t.n);
    std::uint64_t rank = static_cast<std::uint64_t>(t.root - 1) * per_root;
    std::uint64_t c = 0;
    for (int digit : encode_unrooted(t)) c = c * t.n + static_cast<std::uint64_t>(digit - 1);
    return rank + c;
}

RootedLabeledTree birthday_tree_from_sequence(int n, const std::function<int()>& next_label) {
    RootedLabeledTree t;
    t.n = n;
    t.parent.assign(n + 1, 0);
    std::vector<char> seen(n + 1, 0);
    int prev = next_label();
    t.root = prev;
    seen[prev] = 1;
    int found = 1;
    while (found < n) {
        int y = next_label();
        if (!seen[y]) {
            seen[y] = 1;
            t.parent[y] = prev;
            ++found;
        }
        prev = y;
    }
    return t;
}

RootedLabeledTree sample_ptree(const ProbVector& p, Rng& rng) {
    const int n = p.n();
    // inverse-cdf draw; n stays small in every use of this sampler
    std::vector<double> cdf(p.p);
    for (int i = 1; i < n; ++i) cdf[i] += cdf[i - 1];
    auto draw = [&]() {
        double u = rng.uniform01() * cdf[n - 1];
        int lo = 0, hi = n - 1;
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (cdf[mid] > u) hi = mid; else lo = mid + 1;
        }
        return lo + 1;
    };
    return birthday_tree_from_sequence(n, draw);
}

} // namespace icrt
