#ifndef GLAUBER_TESTS_BRUTE_HPP
#define GLAUBER_TESTS_BRUTE_HPP

// Test-only oracles: plain enumeration with no shared code paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "glauber/graph.hpp"

namespace brute {

using glauber::Graph;
using glauber::Vertex;

// Calls f(spins) for every assignment of q values to `vars`, other entries
// of `spins` left as given.
inline void for_each_assignment(std::vector<int>& spins, const std::vector<Vertex>& vars, int q,
                                const std::function<void(const std::vector<int>&)>& f) {
    for (Vertex v : vars) spins[v] = 0;
    while (true) {
        f(spins);
        std::size_t i = 0;
        while (i < vars.size()) {
            if (++spins[vars[i]] < q) break;
            spins[vars[i]] = 0;
            ++i;
        }
        if (i == vars.size()) return;
    }
}

inline bool proper_on(const Graph& g, const std::vector<int>& spins, const std::vector<Vertex>& vars) {
    for (Vertex v : vars)
        for (Vertex u : g.neighbours(v))
            if (spins[u] >= 0 && spins[u] == spins[v]) return false;
    return true;
}

inline bool independent_on(const Graph& g, const std::vector<int>& spins, const std::vector<Vertex>& vars) {
    for (Vertex v : vars)
        if (spins[v] == 1)
            for (Vertex u : g.neighbours(v))
                if (spins[u] == 1) return false;
    return true;
}

// Proper extensions of the outside spins (negative = free) onto `block`,
// keyed by the block spins in the given order.
inline std::map<std::vector<int>, double> colouring_law(const Graph& g, const std::vector<Vertex>& block,
                                                        std::vector<int> spins, int k) {
    std::map<std::vector<int>, double> law;
    double total = 0;
    for_each_assignment(spins, block, k, [&](const std::vector<int>& s) {
        if (!proper_on(g, s, block)) return;
        std::vector<int> key;
        for (Vertex v : block) key.push_back(s[v]);
        law[key] += 1;
        total += 1;
    });
    for (auto& [key, p] : law) p /= total;
    return law;
}

inline std::uint64_t count_colourings(const Graph& g, const std::vector<Vertex>& block, std::vector<int> spins,
                                      int k) {
    std::uint64_t count = 0;
    for_each_assignment(spins, block, k, [&](const std::vector<int>& s) {
        if (proper_on(g, s, block)) ++count;
    });
    return count;
}

inline std::map<std::vector<int>, double> hardcore_law(const Graph& g, const std::vector<Vertex>& block,
                                                       std::vector<int> spins, double lambda) {
    std::map<std::vector<int>, double> law;
    double total = 0;
    for_each_assignment(spins, block, 2, [&](const std::vector<int>& s) {
        if (!independent_on(g, s, block)) return;
        std::vector<int> key;
        int occ = 0;
        for (Vertex v : block) {
            key.push_back(s[v]);
            occ += s[v];
        }
        const double w = std::pow(lambda, occ);
        law[key] += w;
        total += w;
    });
    for (auto& [key, p] : law) p /= total;
    return law;
}

inline double occupation(const Graph& g, const std::vector<Vertex>& block, const std::vector<int>& spins,
                         double lambda, Vertex v) {
    const auto law = hardcore_law(g, block, spins, lambda);
    std::size_t pos = 0;
    while (block[pos] != v) ++pos;
    double p = 0;
    for (const auto& [key, q] : law)
        if (key[pos] == 1) p += q;
    return p;
}

inline double tv(const std::map<std::vector<int>, double>& a, const std::map<std::vector<int>, double>& b) {
    double s = 0;
    for (const auto& [key, p] : a) {
        auto it = b.find(key);
        s += std::abs(p - (it == b.end() ? 0.0 : it->second));
    }
    for (const auto& [key, p] : b)
        if (!a.count(key)) s += p;
    return s / 2;
}

}  // namespace brute

#endif
