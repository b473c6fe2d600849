#ifndef GLAUBER_GRAPH_HPP
#define GLAUBER_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace glauber {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

class GraphError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Immutable simple undirected graph in compressed adjacency form.
/// Neighbour lists are sorted; edges are stored once per endpoint.
class Graph {
  public:
    Graph() = default;

    /// Builds from an edge list. Throws GraphError on self-loops, duplicate
    /// edges (in either orientation) or out-of-range endpoints.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges);

    [[nodiscard]] std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    [[nodiscard]] std::size_t edge_count() const { return neighbours_.size() / 2; }

    [[nodiscard]] std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
    [[nodiscard]] std::span<const Vertex> neighbours(Vertex v) const {
        return {neighbours_.data() + offsets_[v], degree(v)};
    }
    [[nodiscard]] bool has_edge(Vertex u, Vertex v) const;
    [[nodiscard]] std::size_t max_degree() const;

    /// Edges with u < v in lexicographic order.
    [[nodiscard]] std::vector<Edge> edges() const;

    /// Adds one edge to a copy of the graph.
    [[nodiscard]] Graph with_edge(Vertex u, Vertex v) const;

    friend bool operator==(const Graph&, const Graph&) = default;

  private:
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> neighbours_;
};

/// Sparse Erdos-Renyi G(n, d/n). Pairs are visited in (u < v) lexicographic
/// order and skipped geometrically, so the expected cost is O(n + m).
Graph generate_gnp(std::size_t n, double d, std::uint64_t seed);

/// Closed walk of distinct vertices, canonical rotation/reflection: lowest id
/// first and vertices[1] < vertices.back().
struct Cycle {
    std::vector<Vertex> vertices;
    friend bool operator==(const Cycle&, const Cycle&) = default;
    friend auto operator<=>(const Cycle&, const Cycle&) = default;
};

/// Every simple cycle of length at most max_len, each reported once.
std::vector<Cycle> short_cycles(const Graph& g, std::size_t max_len);

/// Edges that lie on at least one simple cycle of length at most max_len,
/// sorted. Polynomial: one bounded BFS per edge, so it stays usable when the
/// cycles themselves are too many to list.
std::vector<Edge> short_cycle_edges(const Graph& g, std::size_t max_len);

/// Lazy depth-first stream of the self-avoiding paths from a start vertex.
/// The length-0 path comes first. After next() returns a path, prune() stops
/// the stream from extending that particular path.
class SelfAvoidingPaths {
  public:
    SelfAvoidingPaths(const Graph& g, Vertex start, std::size_t max_len);

    /// Next path as a view into internal storage, valid until the next call.
    std::optional<std::span<const Vertex>> next();
    void prune() { pruned_ = true; }

  private:
    const Graph* graph_;
    std::size_t max_len_;
    std::vector<Vertex> path_;
    std::vector<std::size_t> cursor_;  // next neighbour index to try per depth
    std::vector<std::uint8_t> on_path_;
    bool started_ = false;
    bool pruned_ = false;
};

/// Calls visit(path) for every self-avoiding path from `start` of at most
/// max_len edges. Returning false from visit prunes extensions of that path.
template <class Visitor>
void for_each_self_avoiding_path(const Graph& g, Vertex start, std::size_t max_len, Visitor&& visit) {
    SelfAvoidingPaths paths(g, start, max_len);
    while (auto p = paths.next()) {
        if (!visit(*p)) paths.prune();
    }
}

/// Connected components of the subgraph induced by `allowed`. Each component
/// is sorted; components are ordered by their smallest member.
std::vector<std::vector<Vertex>> induced_components(const Graph& g, std::span<const Vertex> allowed);

/// Number of edges of g with both endpoints in the (sorted or unsorted) set.
std::size_t induced_edge_count(const Graph& g, std::span<const Vertex> vertices);

// Edge-list text format: "n m" then m lines "u v", 0-based, u < v, sorted.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

}  // namespace glauber

#endif  // GLAUBER_GRAPH_HPP
