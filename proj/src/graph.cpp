#include "glauber/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "glauber/random.hpp"

namespace glauber {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
    std::vector<Edge> normalized;
    normalized.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) {
            throw GraphError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range for n=" +
                             std::to_string(n));
        }
        if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
        normalized.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(normalized.begin(), normalized.end());
    if (auto dup = std::adjacent_find(normalized.begin(), normalized.end()); dup != normalized.end()) {
        throw GraphError("duplicate edge (" + std::to_string(dup->first) + ", " + std::to_string(dup->second) + ")");
    }

    Graph g;
    std::vector<std::size_t> degree(n, 0);
    for (auto [u, v] : normalized) {
        ++degree[u];
        ++degree[v];
    }
    g.offsets_.assign(n + 1, 0);
    std::partial_sum(degree.begin(), degree.end(), g.offsets_.begin() + 1);
    g.neighbours_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : normalized) {
        g.neighbours_[fill[u]++] = v;
        g.neighbours_[fill[v]++] = u;
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(g.neighbours_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
                  g.neighbours_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
    }
    return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    auto nb = neighbours(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t Graph::max_degree() const {
    std::size_t best = 0;
    for (Vertex v = 0; v < vertex_count(); ++v) best = std::max(best, degree(v));
    return best;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (Vertex u = 0; u < vertex_count(); ++u) {
        for (Vertex v : neighbours(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

Graph Graph::with_edge(Vertex u, Vertex v) const {
    auto e = edges();
    e.emplace_back(u, v);
    return from_edges(vertex_count(), e);
}

Graph generate_gnp(std::size_t n, double d, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("generate_gnp: n must be at least 1");
    if (!(d >= 0.0) || d > static_cast<double>(n)) {
        throw std::invalid_argument("generate_gnp: expected degree d must lie in [0, n]");
    }
    const double p = d / static_cast<double>(n);
    std::vector<Edge> edges;
    if (p >= 1.0) {
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
        return Graph::from_edges(n, edges);
    }
    if (p > 0.0) {
        // Batagelj-Brandes: walk the lower triangle (v > w) with geometric skips.
        Rng rng(seed);
        const double log_q = std::log1p(-p);
        edges.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * static_cast<double>(n - 1) / 2.0 * 1.1) + 16);
        std::int64_t v = 1;
        std::int64_t w = -1;
        const auto nn = static_cast<std::int64_t>(n);
        while (v < nn) {
            const double r = uniform01(rng);
            const double skip = std::floor(std::log1p(-r) / log_q);
            if (skip > static_cast<double>(std::numeric_limits<std::int64_t>::max() / 2)) break;
            w += 1 + static_cast<std::int64_t>(skip);
            while (w >= v && v < nn) {
                w -= v;
                ++v;
            }
            if (v < nn) edges.emplace_back(static_cast<Vertex>(w), static_cast<Vertex>(v));
        }
    }
    return Graph::from_edges(n, edges);
}

namespace {

// Cycles through `start` whose other vertices all exceed `start`.
void cycles_from(const Graph& g, Vertex start, std::size_t max_len, std::vector<Vertex>& path,
                 std::vector<std::uint8_t>& on_path, std::vector<Cycle>& out) {
    const Vertex tail = path.back();
    for (Vertex next : g.neighbours(tail)) {
        if (next == start && path.size() >= 3 && path[1] < path.back()) {
            out.push_back(Cycle{path});
            continue;
        }
        if (next <= start || on_path[next] || path.size() >= max_len) continue;
        on_path[next] = 1;
        path.push_back(next);
        cycles_from(g, start, max_len, path, on_path, out);
        path.pop_back();
        on_path[next] = 0;
    }
}

}  // namespace

std::vector<Cycle> short_cycles(const Graph& g, std::size_t max_len) {
    if (max_len < 3) throw std::invalid_argument("short_cycles: max_len must be at least 3");
    std::vector<Cycle> out;
    std::vector<std::uint8_t> on_path(g.vertex_count(), 0);
    std::vector<Vertex> path;
    for (Vertex s = 0; s < g.vertex_count(); ++s) {
        path.assign(1, s);
        on_path[s] = 1;
        cycles_from(g, s, max_len, path, on_path, out);
        on_path[s] = 0;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Edge> short_cycle_edges(const Graph& g, std::size_t max_len) {
    if (max_len < 3) throw std::invalid_argument("short_cycle_edges: max_len must be at least 3");
    const std::size_t n = g.vertex_count();
    constexpr std::size_t kUnseen = SIZE_MAX;
    std::vector<std::size_t> dist(n, kUnseen);
    std::vector<Vertex> queue, touched;
    std::vector<Edge> out;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v : g.neighbours(u)) {
            if (v < u) continue;
            // shortest u-v path avoiding the edge itself; it closes a simple cycle
            queue.assign(1, u);
            dist[u] = 0;
            touched.assign(1, u);
            bool found = false;
            for (std::size_t head = 0; head < queue.size() && !found; ++head) {
                const Vertex x = queue[head];
                if (dist[x] + 1 > max_len - 1) break;
                for (Vertex y : g.neighbours(x)) {
                    if (x == u && y == v) continue;
                    if (dist[y] != kUnseen) continue;
                    if (y == v) {
                        found = true;
                        break;
                    }
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                    touched.push_back(y);
                }
            }
            for (Vertex t : touched) dist[t] = kUnseen;
            if (found) out.emplace_back(u, v);
        }
    }
    return out;
}

SelfAvoidingPaths::SelfAvoidingPaths(const Graph& g, Vertex start, std::size_t max_len)
    : graph_(&g), max_len_(max_len), on_path_(g.vertex_count(), 0) {
    if (start >= g.vertex_count()) throw std::out_of_range("SelfAvoidingPaths: start vertex out of range");
    path_.push_back(start);
    cursor_.push_back(0);
    on_path_[start] = 1;
}

std::optional<std::span<const Vertex>> SelfAvoidingPaths::next() {
    if (!started_) {
        started_ = true;
        return std::span<const Vertex>(path_);
    }
    if (path_.empty()) return std::nullopt;

    // Try to extend the current path unless pruned or at the length cap.
    bool may_extend = !pruned_ && path_.size() - 1 < max_len_;
    pruned_ = false;
    while (!path_.empty()) {
        if (may_extend) {
            const Vertex tail = path_.back();
            auto nb = graph_->neighbours(tail);
            std::size_t& i = cursor_.back();
            while (i < nb.size() && on_path_[nb[i]]) ++i;
            if (i < nb.size()) {
                const Vertex v = nb[i++];
                path_.push_back(v);
                cursor_.push_back(0);
                on_path_[v] = 1;
                return std::span<const Vertex>(path_);
            }
        }
        // Exhausted this prefix: backtrack one level and keep scanning siblings.
        on_path_[path_.back()] = 0;
        path_.pop_back();
        cursor_.pop_back();
        may_extend = true;
    }
    return std::nullopt;
}

std::vector<std::vector<Vertex>> induced_components(const Graph& g, std::span<const Vertex> allowed) {
    const std::size_t n = g.vertex_count();
    std::vector<std::uint8_t> in_set(n, 0);
    for (Vertex v : allowed) {
        if (v >= n) throw std::out_of_range("induced_components: vertex out of range");
        in_set[v] = 1;
    }
    std::vector<Vertex> sorted(allowed.begin(), allowed.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> stack;
    for (Vertex s : sorted) {
        if (in_set[s] != 1) continue;
        std::vector<Vertex> comp;
        in_set[s] = 2;
        stack.push_back(s);
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (Vertex w : g.neighbours(u)) {
                if (in_set[w] == 1) {
                    in_set[w] = 2;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

std::size_t induced_edge_count(const Graph& g, std::span<const Vertex> vertices) {
    std::vector<Vertex> sorted(vertices.begin(), vertices.end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t count = 0;
    for (Vertex u : sorted) {
        for (Vertex v : g.neighbours(u)) {
            if (u < v && std::binary_search(sorted.begin(), sorted.end(), v)) ++count;
        }
    }
    return count;
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw GraphError("edge list: missing header line");
    std::istringstream header(line);
    long long n = -1;
    long long m = -1;
    if (!(header >> n >> m) || n < 0 || m < 0) throw GraphError("edge list: malformed header '" + line + "'");

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        if (!next_line()) throw GraphError("edge list: expected " + std::to_string(m) + " edges, found " + std::to_string(i));
        std::istringstream row(line);
        long long u = -1;
        long long v = -1;
        std::string extra;
        if (!(row >> u >> v) || (row >> extra) || u < 0 || v < 0) {
            throw GraphError("edge list line " + std::to_string(line_no) + ": malformed edge '" + line + "'");
        }
        if (u >= n || v >= n) throw GraphError("edge list line " + std::to_string(line_no) + ": vertex id out of range");
        if (u == v) throw GraphError("edge list line " + std::to_string(line_no) + ": self-loop");
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    if (next_line()) throw GraphError("edge list: trailing content after " + std::to_string(m) + " edges");
    return Graph::from_edges(static_cast<std::size_t>(n), edges);
}

}  // namespace glauber
