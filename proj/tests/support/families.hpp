#ifndef GLAUBER_TESTS_FAMILIES_HPP
#define GLAUBER_TESTS_FAMILIES_HPP

// Non-isomorphic trees and unicyclic graphs, deduplicated by a canonical
// string (AHU codes; for unicyclic graphs the cyclic sequence of hanging
// tree codes, minimized over rotation and reflection).

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "glauber/graph.hpp"

namespace families {

using glauber::Edge;
using glauber::Vertex;
using Adj = std::vector<std::vector<int>>;

inline Adj adjacency(int n, const std::vector<Edge>& edges) {
    Adj adj(static_cast<std::size_t>(n));
    for (auto [u, v] : edges) {
        adj[u].push_back(static_cast<int>(v));
        adj[v].push_back(static_cast<int>(u));
    }
    return adj;
}

// AHU code of the tree hanging from `root`, never entering `blocked`.
inline std::string rooted_code(const Adj& adj, int root, int parent, const std::vector<char>& blocked) {
    std::vector<std::string> kids;
    for (int w : adj[static_cast<std::size_t>(root)])
        if (w != parent && !blocked[static_cast<std::size_t>(w)]) kids.push_back(rooted_code(adj, w, root, blocked));
    std::sort(kids.begin(), kids.end());
    std::string out = "(";
    for (auto& k : kids) out += k;
    return out + ")";
}

inline std::string tree_code(int n, const std::vector<Edge>& edges) {
    const Adj adj = adjacency(n, edges);
    // centres by leaf stripping
    std::vector<int> deg(static_cast<std::size_t>(n));
    std::vector<int> layer;
    for (int i = 0; i < n; ++i) {
        deg[static_cast<std::size_t>(i)] = static_cast<int>(adj[static_cast<std::size_t>(i)].size());
        if (deg[static_cast<std::size_t>(i)] <= 1) layer.push_back(i);
    }
    int left = n;
    while (left > 2) {
        left -= static_cast<int>(layer.size());
        std::vector<int> next;
        for (int u : layer)
            for (int w : adj[static_cast<std::size_t>(u)])
                if (--deg[static_cast<std::size_t>(w)] == 1) next.push_back(w);
        layer = next;
    }
    const std::vector<char> none(static_cast<std::size_t>(n), 0);
    std::string best;
    for (int c : layer) {
        std::string code = rooted_code(adj, c, -1, none);
        if (best.empty() || code < best) best = code;
    }
    return best;
}

inline std::string unicyclic_code(int n, const std::vector<Edge>& edges) {
    const Adj adj = adjacency(n, edges);
    std::vector<int> deg(static_cast<std::size_t>(n));
    std::vector<char> peeled(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    for (int i = 0; i < n; ++i) {
        deg[static_cast<std::size_t>(i)] = static_cast<int>(adj[static_cast<std::size_t>(i)].size());
        if (deg[static_cast<std::size_t>(i)] <= 1) stack.push_back(i);
    }
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (peeled[static_cast<std::size_t>(u)]) continue;
        peeled[static_cast<std::size_t>(u)] = 1;
        for (int w : adj[static_cast<std::size_t>(u)])
            if (!peeled[static_cast<std::size_t>(w)] && --deg[static_cast<std::size_t>(w)] <= 1) stack.push_back(w);
    }
    std::vector<char> on_cycle(static_cast<std::size_t>(n));
    int start = -1;
    for (int i = 0; i < n; ++i) {
        on_cycle[static_cast<std::size_t>(i)] = !peeled[static_cast<std::size_t>(i)];
        if (on_cycle[static_cast<std::size_t>(i)] && start < 0) start = i;
    }
    std::vector<int> cycle{start};
    int prev = -1, cur = start;
    while (true) {
        int nxt = -1;
        for (int w : adj[static_cast<std::size_t>(cur)])
            if (on_cycle[static_cast<std::size_t>(w)] && w != prev) {
                nxt = w;
                break;
            }
        if (nxt == start || nxt < 0) break;
        cycle.push_back(nxt);
        prev = cur;
        cur = nxt;
    }
    std::vector<std::string> seq;
    for (int c : cycle) seq.push_back(rooted_code(adj, c, -1, on_cycle));
    const std::size_t L = seq.size();
    std::string best;
    for (int dir = 0; dir < 2; ++dir) {
        for (std::size_t r = 0; r < L; ++r) {
            std::string s;
            for (std::size_t i = 0; i < L; ++i) s += seq[dir == 0 ? (r + i) % L : (r + L - i) % L] + "|";
            if (best.empty() || s < best) best = s;
        }
    }
    return best;
}

struct Family {
    int n;
    std::vector<Edge> edges;
};

// Every tree on n+1 vertices is a tree on n vertices plus a leaf; every
// unicyclic graph on n+1 vertices is one on n vertices plus a leaf, or the
// cycle C_{n+1}.
inline std::vector<Family> grow(const std::vector<Family>& base, bool unicyclic_codes) {
    std::vector<Family> out;
    std::set<std::string> seen;
    for (const auto& f : base) {
        for (int v = 0; v < f.n; ++v) {
            Family g{f.n + 1, f.edges};
            g.edges.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(f.n));
            const std::string code = unicyclic_codes ? unicyclic_code(g.n, g.edges) : tree_code(g.n, g.edges);
            if (seen.insert(code).second) out.push_back(std::move(g));
        }
    }
    return out;
}

inline std::vector<Family> trees(int n) {
    std::vector<Family> cur{{1, {}}};
    for (int m = 1; m < n; ++m) cur = grow(cur, false);
    return cur;
}

inline Family cycle(int n) {
    Family c{n, {}};
    for (int i = 0; i + 1 < n; ++i) c.edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
    c.edges.emplace_back(0, static_cast<Vertex>(n - 1));
    return c;
}

inline std::vector<Family> unicyclic(int n) {
    if (n < 3) return {};
    std::vector<Family> cur{cycle(3)};
    for (int m = 3; m < n; ++m) {
        cur = grow(cur, true);
        cur.push_back(cycle(m + 1));
    }
    return cur;
}

}  // namespace families

#endif
