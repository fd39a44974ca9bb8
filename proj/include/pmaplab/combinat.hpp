#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <vector>

#include "errors.hpp"

namespace pmaplab {

struct Digraph {
    int n = 0;
    std::vector<std::vector<int>> adj;

    explicit Digraph(int n_ = 0) : n(n_), adj(n_) {}
    void add_edge(int a, int b) { adj[a].push_back(b); }
    void sort_adjacency() {
        for (auto& a : adj) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
    }
};

// Tarjan's algorithm, iterative. comp[v] numbers components in reverse
// topological order (sinks get small ids).
inline std::vector<int> tarjan_scc(const Digraph& g, int* count = nullptr) {
    const int n = g.n;
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<char> on_stack(n, 0);
    std::vector<std::pair<int, std::size_t>> call;
    int next_index = 0, ncomp = 0;
    for (int s = 0; s < n; ++s) {
        if (index[s] != -1) continue;
        call.push_back({s, 0});
        index[s] = low[s] = next_index++;
        stack.push_back(s);
        on_stack[s] = 1;
        while (!call.empty()) {
            auto& [v, it] = call.back();
            if (it < g.adj[v].size()) {
                int w = g.adj[v][it++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            int done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    if (count) *count = ncomp;
    return comp;
}

// Strongly connected components listed in a topological order of the
// condensation; ties broken by smallest member. Members sorted.
inline std::vector<std::vector<int>> scc_topological(const Digraph& g) {
    int nc = 0;
    auto comp = tarjan_scc(g, &nc);
    std::vector<std::vector<int>> members(nc);
    for (int v = 0; v < g.n; ++v) members[comp[v]].push_back(v);
    std::vector<std::vector<int>> succ(nc);
    std::vector<int> indeg(nc, 0);
    for (int v = 0; v < g.n; ++v)
        for (int w : g.adj[v])
            if (comp[v] != comp[w]) {
                succ[comp[v]].push_back(comp[w]);
                ++indeg[comp[w]];
            }
    using Key = std::pair<int, int>; // (min member, comp)
    std::priority_queue<Key, std::vector<Key>, std::greater<Key>> ready;
    for (int c = 0; c < nc; ++c)
        if (indeg[c] == 0) ready.push({members[c].front(), c});
    std::vector<std::vector<int>> out;
    while (!ready.empty()) {
        int c = ready.top().second;
        ready.pop();
        out.push_back(members[c]);
        for (int d : succ[c])
            if (--indeg[d] == 0) ready.push({members[d].front(), d});
    }
    return out;
}

struct Literal {
    int var = 0;
    bool positive = true;
};

struct TwoSat {
    int m = 0;
    std::vector<std::pair<Literal, Literal>> clauses;

    explicit TwoSat(int m_ = 0) : m(m_) {}
    void add(Literal a, Literal b) { clauses.push_back({a, b}); }
    void add_unit(Literal a) { clauses.push_back({a, a}); }
};

inline bool satisfies(const TwoSat& phi, const std::vector<bool>& x) {
    auto val = [&](Literal l) { return x[l.var] == l.positive; };
    for (auto& [a, b] : phi.clauses)
        if (!val(a) && !val(b)) return false;
    return true;
}

// Implication-graph SCC method.
inline std::optional<std::vector<bool>> two_sat_solve(const TwoSat& phi) {
    const int m = phi.m;
    Digraph g(2 * m);
    auto node = [](Literal l) { return 2 * l.var + (l.positive ? 0 : 1); };
    for (auto& [a, b] : phi.clauses) {
        Literal na{a.var, !a.positive}, nb{b.var, !b.positive};
        g.add_edge(node(na), node(b));
        g.add_edge(node(nb), node(a));
    }
    auto comp = tarjan_scc(g);
    std::vector<bool> x(m);
    for (int v = 0; v < m; ++v) {
        if (comp[2 * v] == comp[2 * v + 1]) return std::nullopt;
        // Tarjan ids are reverse topological: pick the literal later in topo order.
        x[v] = comp[2 * v] < comp[2 * v + 1];
    }
    return x;
}

// Turns True variables off in ascending index order, each time asking the
// solver for an assignment that keeps every current False variable False.
inline std::vector<bool> minimal_true_assignment(const TwoSat& phi, std::vector<bool> x) {
    if (static_cast<int>(x.size()) != phi.m || !satisfies(phi, x)) throw SeedNotSatisfying();
    for (int e = 0; e < phi.m; ++e) {
        if (!x[e]) continue;
        TwoSat trial = phi;
        for (int v = 0; v < phi.m; ++v)
            if (!x[v] || v == e) trial.add_unit({v, false});
        if (auto y = two_sat_solve(trial)) x = *y;
    }
    return x;
}

// Shortest directed cycle through v as [v, u1, ..., uk] meaning
// v -> u1 -> ... -> uk -> v; a self-loop gives [v].
inline std::optional<std::vector<int>> shortest_cycle_through(const Digraph& g, int v) {
    auto sorted_adj = [&](int x) {
        auto a = g.adj[x];
        std::sort(a.begin(), a.end());
        return a;
    };
    auto first = sorted_adj(v);
    if (std::binary_search(first.begin(), first.end(), v)) return std::vector<int>{v};
    std::vector<int> parent(g.n, -2);
    std::queue<int> q;
    parent[v] = -1;
    q.push(v);
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (int w : sorted_adj(x)) {
            if (w == v && x != v) {
                std::vector<int> path;
                for (int y = x; y != -1; y = parent[y]) path.push_back(y);
                std::reverse(path.begin(), path.end());
                return path;
            }
            if (parent[w] == -2) {
                parent[w] = x;
                q.push(w);
            }
        }
    }
    return std::nullopt;
}

} // namespace pmaplab
