#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "glauber/graph.hpp"

using namespace glauber;

namespace {

Graph path(std::size_t n) {
    std::vector<Edge> e;
    for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph::from_edges(n, e);
}

Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> e;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (coin(rng)) e.emplace_back(u, v);
    return Graph::from_edges(n, e);
}

void check_structure(const Graph& g) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        std::set<Vertex> seen;
        for (Vertex u : g.neighbours(v)) {
            CHECK(u != v);
            CHECK(seen.insert(u).second);
            const auto back = g.neighbours(u);
            CHECK(std::find(back.begin(), back.end(), v) != back.end());
        }
        CHECK(seen.size() == g.degree(v));
    }
}

// Every simple cycle of length <= max_len as a sorted vertex set plus its
// cyclic sequence, by brute force over start vertex and DFS.
std::set<std::vector<Vertex>> brute_cycles(const Graph& g, std::size_t max_len) {
    std::set<std::vector<Vertex>> out;
    const auto n = static_cast<Vertex>(g.vertex_count());
    std::vector<Vertex> stack;
    std::function<void(Vertex)> dfs = [&](Vertex v) {
        for (Vertex u : g.neighbours(v)) {
            if (u == stack.front() && stack.size() >= 3) {
                // canonical: lowest first, direction toward the smaller neighbour
                std::vector<Vertex> c = stack;
                if (c[1] > c.back()) std::reverse(c.begin() + 1, c.end());
                out.insert(c);
            }
            if (u <= stack.front() || std::find(stack.begin(), stack.end(), u) != stack.end()) continue;
            if (stack.size() == max_len) continue;
            stack.push_back(u);
            dfs(u);
            stack.pop_back();
        }
    };
    for (Vertex s = 0; s < n; ++s) {
        stack.assign(1, s);
        dfs(s);
    }
    return out;
}

std::size_t brute_path_count(const Graph& g, std::vector<Vertex>& p, std::size_t max_len) {
    std::size_t count = 1;
    if (p.size() - 1 == max_len) return count;
    for (Vertex u : g.neighbours(p.back())) {
        if (std::find(p.begin(), p.end(), u) != p.end()) continue;
        p.push_back(u);
        count += brute_path_count(g, p, max_len);
        p.pop_back();
    }
    return count;
}

}  // namespace

TEST_CASE("generate_gnp examples") {
    CHECK(generate_gnp(4, 0.0, 3).edge_count() == 0);
    const Graph tri = generate_gnp(3, 3.0, 9);
    CHECK(tri.edge_count() == 3);
    const Graph big = generate_gnp(10000, 5.0, 2024);
    const double m = 10000.0 * 9999.0 / 2.0, p = 5.0 / 10000.0;
    const double sigma = std::sqrt(m * p * (1 - p));
    CHECK(std::abs(static_cast<double>(big.edge_count()) - m * p) <= 3 * sigma);
    check_structure(big);
}

TEST_CASE("generate_gnp is deterministic per seed") {
    CHECK(generate_gnp(500, 5.0, 7) == generate_gnp(500, 5.0, 7));
    CHECK_FALSE(generate_gnp(500, 5.0, 7) == generate_gnp(500, 5.0, 8));
    std::ostringstream a, b;
    write_edge_list(a, generate_gnp(300, 4.0, 1));
    write_edge_list(b, generate_gnp(300, 4.0, 1));
    CHECK(a.str() == b.str());
}

TEST_CASE("generate_gnp rejects bad parameters") {
    CHECK_THROWS(generate_gnp(10, -1.0, 1));
    CHECK_THROWS(generate_gnp(10, 11.0, 1));
}

TEST_CASE("from_edges validates and stays symmetric") {
    CHECK_THROWS_AS(Graph::from_edges(3, std::vector<Edge>{{0, 0}}), GraphError);
    CHECK_THROWS_AS(Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 0}}), GraphError);
    CHECK_THROWS_AS(Graph::from_edges(3, std::vector<Edge>{{0, 3}}), GraphError);
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const Graph g = random_graph(9, 0.4, s);
        check_structure(g);
        if (!g.has_edge(0, 8)) check_structure(g.with_edge(0, 8));
        CHECK(Graph::from_edges(9, g.edges()) == g);
    }
}

TEST_CASE("edge list round trip and reader validation") {
    const Graph g = generate_gnp(100, 5.0, 1);
    std::stringstream s;
    write_edge_list(s, g);
    std::string header;
    std::getline(s, header);
    CHECK(header == "100 " + std::to_string(g.edge_count()));
    s.seekg(0);
    CHECK(read_edge_list(s) == g);
    std::istringstream dup("3 2\n0 1\n0 1\n");
    CHECK_THROWS(read_edge_list(dup));
    std::istringstream loop("3 1\n1 1\n");
    CHECK_THROWS(read_edge_list(loop));
    std::istringstream empty_graph("100 0\n");
    CHECK(read_edge_list(empty_graph).edge_count() == 0);
}

TEST_CASE("short_cycles examples") {
    const Graph tri = Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}});
    const auto c = short_cycles(tri, 3);
    REQUIRE(c.size() == 1);
    CHECK(c[0].vertices == std::vector<Vertex>{0, 1, 2});
    CHECK(short_cycles(path(5), 10).empty());
    const Graph two = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    CHECK(short_cycles(two, 4).size() == 2);
    CHECK_THROWS_AS(short_cycles(tri, 2), std::invalid_argument);
}

TEST_CASE("short_cycles matches brute force") {
    for (std::uint64_t s = 1; s <= 40; ++s) {
        const std::size_t n = 4 + s % 7;
        const Graph g = random_graph(n, 0.35, s);
        for (std::size_t len : {3u, 4u, 6u, 10u}) {
            std::set<std::vector<Vertex>> got;
            for (const auto& c : short_cycles(g, len)) {
                CHECK(c.vertices.size() >= 3);
                CHECK(c.vertices.size() <= len);
                for (std::size_t i = 0; i < c.vertices.size(); ++i)
                    CHECK(g.has_edge(c.vertices[i], c.vertices[(i + 1) % c.vertices.size()]));
                got.insert(c.vertices);
            }
            CHECK(got == brute_cycles(g, len));
        }
    }
}

TEST_CASE("short_cycle_edges are the edges of short cycles") {
    const Graph tri = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {2, 3}});
    CHECK(short_cycle_edges(tri, 3) == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
    CHECK(short_cycle_edges(path(6), 6).empty());
    CHECK_THROWS_AS(short_cycle_edges(tri, 2), std::invalid_argument);
    for (std::uint64_t s = 1; s <= 40; ++s) {
        const Graph g = random_graph(4 + s % 7, 0.35, s);
        for (std::size_t len : {3u, 4u, 6u, 10u}) {
            std::set<Edge> want;
            for (const auto& c : brute_cycles(g, len))
                for (std::size_t i = 0; i < c.size(); ++i) {
                    const Vertex a = c[i], b = c[(i + 1) % c.size()];
                    want.emplace(std::min(a, b), std::max(a, b));
                }
            const auto got = short_cycle_edges(g, len);
            CHECK(std::set<Edge>(got.begin(), got.end()) == want);
            CHECK(std::is_sorted(got.begin(), got.end()));
        }
    }
}

TEST_CASE("self-avoiding path examples") {
    auto collect = [](const Graph& g, Vertex s, std::size_t len) {
        std::set<std::vector<Vertex>> out;
        for_each_self_avoiding_path(g, s, len, [&](std::span<const Vertex> p) {
            out.emplace(p.begin(), p.end());
            return true;
        });
        return out;
    };
    CHECK(collect(Graph::from_edges(1, std::vector<Edge>{}), 0, 5) == std::set<std::vector<Vertex>>{{0}});
    CHECK(collect(path(3), 1, 1) == std::set<std::vector<Vertex>>{{1}, {1, 0}, {1, 2}});
    const Graph tri = Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}});
    CHECK(collect(tri, 0, 2) == std::set<std::vector<Vertex>>{{0}, {0, 1}, {0, 2}, {0, 1, 2}, {0, 2, 1}});
}

TEST_CASE("self-avoiding path counts match brute force") {
    for (std::uint64_t s = 1; s <= 30; ++s) {
        const std::size_t n = 3 + s % 8;
        const Graph g = random_graph(n, 0.45, s * 31);
        for (std::size_t len = 0; len <= 6; ++len) {
            const auto start = static_cast<Vertex>(s % n);
            std::size_t got = 0;
            for_each_self_avoiding_path(g, start, len, [&](std::span<const Vertex>) {
                ++got;
                return true;
            });
            std::vector<Vertex> p{start};
            CHECK(got == brute_path_count(g, p, len));
        }
    }
}

TEST_CASE("pruning skips extensions") {
    const Graph g = path(5);
    std::size_t seen = 0;
    for_each_self_avoiding_path(g, 0, 4, [&](std::span<const Vertex> p) {
        ++seen;
        return p.size() < 2;
    });
    CHECK(seen == 2);
}

TEST_CASE("induced components") {
    const Graph g = path(3);
    CHECK(induced_components(g, std::vector<Vertex>{}).empty());
    const auto split = induced_components(g, std::vector<Vertex>{0, 2});
    CHECK(split == std::vector<std::vector<Vertex>>{{0}, {2}});
    const Graph c = generate_gnp(30, 29.0, 1);
    std::vector<Vertex> all(30);
    std::iota(all.begin(), all.end(), 0);
    CHECK(induced_components(c, all).size() == 1);
    CHECK(induced_edge_count(c, all) == c.edge_count());
}
