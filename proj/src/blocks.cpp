#include "glauber/blocks.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "glauber/random.hpp"

namespace glauber {

std::string_view to_string(BlockKind kind) {
    switch (kind) {
        case BlockKind::Singleton: return "Singleton";
        case BlockKind::Tree: return "Tree";
        case BlockKind::Unicyclic: return "Unicyclic";
        case BlockKind::Other: return "Other";
    }
    return "?";
}

std::string_view to_string(Violation v) {
    switch (v) {
        case Violation::Cover: return "cover";
        case Violation::Boundary: return "boundary";
        case Violation::OtherKind: return "other_kind";
        case Violation::HeavyPath: return "heavy_path";
    }
    return "?";
}

std::size_t BlockPartition::count(BlockKind kind) const {
    return static_cast<std::size_t>(std::count(kinds.begin(), kinds.end(), kind));
}

std::size_t ValidationReport::count(Violation v) const {
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [v](const ViolationRecord& r) { return r.type == v; }));
}

BlockKind classify(const Graph& g, std::span<const Vertex> block) {
    if (block.empty()) throw std::invalid_argument("classify: empty block");
    if (block.size() == 1) return BlockKind::Singleton;
    const bool connected = induced_components(g, block).size() == 1;
    const std::size_t edges = induced_edge_count(g, block);
    if (connected && edges + 1 == block.size()) return BlockKind::Tree;
    if (connected && edges == block.size()) return BlockKind::Unicyclic;
    return BlockKind::Other;
}

BlockPartition make_partition(const Graph& g, std::vector<std::vector<Vertex>> blocks) {
    const std::size_t n = g.vertex_count();
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    blocks.erase(std::remove_if(blocks.begin(), blocks.end(), [](const auto& b) { return b.empty(); }), blocks.end());
    std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

    BlockPartition part;
    part.block_of.assign(n, UINT32_MAX);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (Vertex v : blocks[i]) {
            if (v >= n) throw std::invalid_argument("make_partition: vertex out of range");
            if (part.block_of[v] != UINT32_MAX) throw std::invalid_argument("make_partition: blocks overlap");
            part.block_of[v] = static_cast<std::uint32_t>(i);
        }
    }
    if (std::find(part.block_of.begin(), part.block_of.end(), UINT32_MAX) != part.block_of.end()) {
        throw std::invalid_argument("make_partition: blocks do not cover every vertex");
    }
    part.kinds.reserve(blocks.size());
    part.boundary.resize(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        part.kinds.push_back(classify(g, blocks[i]));
        auto& bd = part.boundary[i];
        for (Vertex v : blocks[i]) {
            for (Vertex u : g.neighbours(v)) {
                if (part.block_of[u] != i) bd.push_back(u);
            }
        }
        std::sort(bd.begin(), bd.end());
        bd.erase(std::unique(bd.begin(), bd.end()), bd.end());
    }
    part.blocks = std::move(blocks);
    return part;
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

BlockPartition build_blocks(const Graph& g, const BreakPointSet& bp, const WeightParams& p) {
    const std::size_t n = g.vertex_count();
    if (bp.membership.size() != n) throw std::invalid_argument("build_blocks: break-point set does not match graph");

    const auto components = induced_components(g, bp.complement_ids());
    constexpr std::size_t kNone = SIZE_MAX;
    std::vector<std::size_t> comp_of(n, kNone);
    for (std::size_t c = 0; c < components.size(); ++c)
        for (Vertex v : components[c]) comp_of[v] = c;

    // Short cycles themselves can be exponentially many, so work with the
    // edges that lie on one. Cycles sharing a vertex are connected through
    // these edges, which gives the same merged groups.
    const auto cycle_edges = short_cycle_edges(g, p.cycle_cap);

    // Units: one per component, then one per vertex.
    const std::size_t vertex_base = components.size();
    UnionFind uf(components.size() + n);
    UnionFind cycles_only(n);
    std::vector<std::uint8_t> on_cycle(n, 0);
    for (const auto& [a, b] : cycle_edges) {
        uf.unite(vertex_base + a, vertex_base + b);
        cycles_only.unite(a, b);
        on_cycle[a] = on_cycle[b] = 1;
    }
    for (Vertex v = 0; v < n; ++v) {
        if (!on_cycle[v]) continue;
        if (comp_of[v] != kNone) uf.unite(vertex_base + v, comp_of[v]);
        // Components touching a break-point cycle vertex join as well, so
        // that the block's outer boundary holds only break-points.
        for (Vertex u : g.neighbours(v)) {
            if (comp_of[u] != kNone) uf.unite(vertex_base + v, comp_of[u]);
        }
    }

    // Group by union-find root; only groups containing a cycle are cycle blocks.
    struct CycleGroup {
        std::vector<Vertex> verts;
        std::size_t cycle_vertices = 0, cycle_edges = 0;
        std::set<std::size_t> pieces;  // connected pieces of the cycle edges
    };
    std::map<std::size_t, CycleGroup> cycle_groups;
    for (Vertex v = 0; v < n; ++v) {
        if (!on_cycle[v]) continue;
        auto& grp = cycle_groups[uf.find(vertex_base + v)];
        grp.verts.push_back(v);
        ++grp.cycle_vertices;
        grp.pieces.insert(cycles_only.find(v));
    }
    for (const auto& [a, b] : cycle_edges) ++cycle_groups[uf.find(vertex_base + a)].cycle_edges;
    std::vector<std::uint8_t> placed(n, 0);
    for (std::size_t c = 0; c < components.size(); ++c) {
        auto it = cycle_groups.find(uf.find(c));
        if (it != cycle_groups.end())
            it->second.verts.insert(it->second.verts.end(), components[c].begin(), components[c].end());
    }

    std::vector<std::vector<Vertex>> blocks;
    std::size_t merged = 0;
    for (auto& [root, grp] : cycle_groups) {
        auto& verts = grp.verts;
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        for (Vertex v : verts) placed[v] = 1;
        // a lone cycle is a single piece with as many edges as vertices
        if (grp.pieces.size() > 1 || grp.cycle_edges > grp.cycle_vertices) ++merged;
        blocks.push_back(std::move(verts));
    }
    for (Vertex v = 0; v < n; ++v) {
        if (placed[v]) continue;
        if (bp.contains(v)) {
            blocks.push_back({v});
            placed[v] = 1;
        } else {
            const auto& comp = components[comp_of[v]];
            for (Vertex u : comp) placed[u] = 1;
            blocks.push_back(comp);
        }
    }
    BlockPartition part = make_partition(g, std::move(blocks));
    part.merged_cycle_blocks = merged;
    return part;
}

namespace {

struct HeavyPathSearch {
    const Graph& g;
    const WeightParams& p;
    const std::vector<std::uint8_t>& in_block;
    std::vector<std::uint8_t> on_path;
    std::vector<Vertex> path;
    std::vector<Vertex> found;

    bool dfs(double weight) {
        const Vertex tail = path.back();
        for (Vertex v : g.neighbours(tail)) {
            if (!in_block[v] || on_path[v]) continue;
            const std::size_t deg = g.degree(v);
            const double w = weight + vertex_weight(deg, p).log;
            path.push_back(v);
            on_path[v] = 1;
            if (p.is_heavy(deg) && !LogWeight{w}.at_most_one()) {
                found = path;
                return true;
            }
            if (dfs(w)) return true;
            on_path[v] = 0;
            path.pop_back();
        }
        return false;
    }
};

}  // namespace

std::vector<Vertex> find_heavy_entry_path(const Graph& g, std::span<const Vertex> block, Vertex entry,
                                          const WeightParams& p) {
    std::vector<std::uint8_t> in_block(g.vertex_count(), 0);
    for (Vertex v : block) in_block[v] = 1;
    HeavyPathSearch search{g, p, in_block, std::vector<std::uint8_t>(g.vertex_count(), 0), {entry}, {}};
    search.on_path[entry] = 1;
    search.dfs(vertex_weight(g.degree(entry), p).log);
    return search.found;
}

ValidationReport validate_conditions(const Graph& g, const BlockPartition& part, const BreakPointSet& bp,
                                     const WeightParams& p, const ValidationOptions& opts) {
    ValidationReport report;
    const std::size_t n = g.vertex_count();

    // (i) cover and disjointness, recomputed from the block lists.
    std::vector<std::uint32_t> seen(n, 0);
    for (const auto& b : part.blocks)
        for (Vertex v : b) {
            if (v < n) ++seen[v];
        }
    for (Vertex v = 0; v < n; ++v) {
        if (seen[v] != 1) {
            report.violations.push_back({Violation::Cover, part.block_of.size() > v ? part.block_of[v] : 0,
                                         "vertex " + std::to_string(v) + " appears in " + std::to_string(seen[v]) + " blocks",
                                         {}});
        }
    }

    Rng rng(opts.seed);
    std::vector<std::uint8_t> in_block(n, 0);
    for (std::size_t b = 0; b < part.size(); ++b) {
        const auto& block = part.blocks[b];
        // (ii)
        if (block.size() > 1) {
            for (Vertex u : part.boundary[b]) {
                if (!bp.contains(u)) {
                    report.violations.push_back(
                        {Violation::Boundary, b, "boundary vertex " + std::to_string(u) + " is not a break-point", {}});
                }
            }
        }
        // (iii)
        if (part.kinds[b] == BlockKind::Other) {
            report.violations.push_back({Violation::OtherKind, b,
                                         "block of " + std::to_string(block.size()) + " vertices is neither tree nor unicyclic",
                                         {}});
        }
        // (iv)
        const bool has_heavy = std::any_of(block.begin(), block.end(), [&](Vertex v) { return p.is_heavy(g.degree(v)); });
        if (!has_heavy || part.boundary[b].empty()) continue;
        if (block.size() <= opts.exhaustive_block_limit) {
            ++report.blocks_checked_exhaustively;
            for (Vertex u : part.boundary[b]) {
                auto path = find_heavy_entry_path(g, block, u, p);
                if (!path.empty()) {
                    report.violations.push_back({Violation::HeavyPath, b,
                                                 "path of weight above 1 from boundary vertex " + std::to_string(u) +
                                                     " to heavy vertex " + std::to_string(path.back()),
                                                 std::move(path)});
                    break;
                }
            }
            continue;
        }
        ++report.blocks_checked_by_sampling;
        for (Vertex v : block) in_block[v] = 1;
        std::vector<std::uint8_t> on_path(n, 0);
        std::vector<Vertex> path;
        std::vector<Vertex> options;
        bool flagged = false;
        for (std::size_t trial = 0; trial < opts.sampled_paths && !flagged; ++trial) {
            path.assign(1, part.boundary[b][uniform_index(rng, part.boundary[b].size())]);
            on_path[path[0]] = 1;
            double w = vertex_weight(g.degree(path[0]), p).log;
            while (true) {
                options.clear();
                for (Vertex v : g.neighbours(path.back()))
                    if (in_block[v] && !on_path[v]) options.push_back(v);
                if (options.empty()) break;
                const Vertex v = options[uniform_index(rng, options.size())];
                path.push_back(v);
                on_path[v] = 1;
                w += vertex_weight(g.degree(v), p).log;
                if (p.is_heavy(g.degree(v)) && !LogWeight{w}.at_most_one()) {
                    report.violations.push_back({Violation::HeavyPath, b,
                                                 "sampled path of weight above 1 from boundary vertex " +
                                                     std::to_string(path.front()) + " to heavy vertex " + std::to_string(v),
                                                 path});
                    flagged = true;
                    break;
                }
            }
            for (Vertex v : path) on_path[v] = 0;
        }
        for (Vertex v : block) in_block[v] = 0;
    }
    return report;
}

ShatterResult shatter_blocks(const Graph& g, const BlockPartition& part,
                             const std::function<bool(const BlockPartition&, std::size_t)>& keep) {
    ShatterResult out;
    std::vector<std::vector<Vertex>> blocks;
    blocks.reserve(part.size());
    for (std::size_t b = 0; b < part.size(); ++b) {
        if (keep(part, b)) {
            blocks.push_back(part.blocks[b]);
            continue;
        }
        ++out.shattered_blocks;
        out.shattered_vertices += part.blocks[b].size();
        for (Vertex v : part.blocks[b]) blocks.push_back({v});
    }
    out.partition = make_partition(g, std::move(blocks));
    out.partition.merged_cycle_blocks = part.merged_cycle_blocks;
    return out;
}

nlohmann::json block_stats(const BlockPartition& part) {
    std::map<std::size_t, std::size_t> histogram;
    for (const auto& b : part.blocks) ++histogram[b.size()];
    nlohmann::json hist = nlohmann::json::object();
    for (auto [size, count] : histogram) hist[std::to_string(size)] = count;
    return {{"blocks", part.size()},
            {"kinds",
             {{"Singleton", part.count(BlockKind::Singleton)},
              {"Tree", part.count(BlockKind::Tree)},
              {"Unicyclic", part.count(BlockKind::Unicyclic)},
              {"Other", part.count(BlockKind::Other)}}},
            {"size_histogram", hist},
            {"merged_cycle_blocks", part.merged_cycle_blocks}};
}

nlohmann::json to_json(const BlockPartition& part) {
    nlohmann::json blocks = nlohmann::json::array();
    for (std::size_t b = 0; b < part.size(); ++b) {
        blocks.push_back({{"vertices", part.blocks[b]}, {"kind", to_string(part.kinds[b])}, {"boundary", part.boundary[b]}});
    }
    return {{"blocks", blocks}, {"stats", block_stats(part)}};
}

nlohmann::json to_json(const ValidationReport& report) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& v : report.violations) {
        nlohmann::json item = {{"type", to_string(v.type)}, {"block", v.block}, {"detail", v.detail}};
        if (!v.path.empty()) item["path"] = v.path;
        list.push_back(item);
    }
    return {{"ok", report.ok()},
            {"violations", list},
            {"counts",
             {{"cover", report.count(Violation::Cover)},
              {"boundary", report.count(Violation::Boundary)},
              {"other_kind", report.count(Violation::OtherKind)},
              {"heavy_path", report.count(Violation::HeavyPath)}}},
            {"blocks_checked_exhaustively", report.blocks_checked_exhaustively},
            {"blocks_checked_by_sampling", report.blocks_checked_by_sampling}};
}

}  // namespace glauber
