#ifndef GLAUBER_BLOCKS_HPP
#define GLAUBER_BLOCKS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "glauber/graph.hpp"
#include "glauber/weighting.hpp"

namespace glauber {

enum class BlockKind { Singleton, Tree, Unicyclic, Other };

std::string_view to_string(BlockKind kind);

/// Partition of V into blocks. Blocks are sorted internally and ordered by
/// their smallest member; boundary[b] lists the outside neighbours of block b.
struct BlockPartition {
    std::vector<std::vector<Vertex>> blocks;
    std::vector<BlockKind> kinds;
    std::vector<std::uint32_t> block_of;
    std::vector<std::vector<Vertex>> boundary;

    /// Cycle-seeded blocks that absorbed more than one short cycle.
    std::size_t merged_cycle_blocks = 0;

    [[nodiscard]] std::size_t size() const { return blocks.size(); }
    [[nodiscard]] std::size_t count(BlockKind kind) const;
};

/// Singleton if |B| = 1, Tree if connected with |B|-1 induced edges,
/// Unicyclic if connected with |B| induced edges, Other otherwise.
BlockKind classify(const Graph& g, std::span<const Vertex> block);

/// Canonicalizes a list of vertex sets into a partition: sorts each block,
/// orders blocks by smallest member, classifies and computes boundaries.
/// Throws std::invalid_argument if the sets do not partition V.
BlockPartition make_partition(const Graph& g, std::vector<std::vector<Vertex>> blocks);

/// Block creation from break-points and short cycles.
///
/// Cycle blocks: every cycle of length <= cycle_cap is seeded with its own
/// vertices plus each non-break-point component (of the subgraph induced by
/// non-break-points) that contains or touches a cycle vertex. Seeds that
/// share a vertex or a component are merged. Everything else is either a
/// break-point singleton or a whole non-break-point component.
BlockPartition build_blocks(const Graph& g, const BreakPointSet& bp, const WeightParams& p);

enum class Violation { Cover, Boundary, OtherKind, HeavyPath };

std::string_view to_string(Violation v);

struct ViolationRecord {
    Violation type;
    std::size_t block;
    std::string detail;
    std::vector<Vertex> path;  // offending path for HeavyPath
};

struct ValidationReport {
    std::vector<ViolationRecord> violations;
    std::size_t blocks_checked_exhaustively = 0;
    std::size_t blocks_checked_by_sampling = 0;

    [[nodiscard]] bool ok() const { return violations.empty(); }
    [[nodiscard]] std::size_t count(Violation v) const;
};

struct ValidationOptions {
    std::size_t exhaustive_block_limit = 25;
    std::size_t sampled_paths = 10'000;
    std::uint64_t seed = 0x5eed;
};

/// Checks (i) cover/disjointness, (ii) multi-vertex block boundaries hold
/// only break-points, (iii) no block of kind Other and (iv) no path of weight
/// above 1 that enters a block from its boundary and ends at a heavy vertex
/// of the block. (iv) is exhaustive for small blocks and sampled otherwise.
ValidationReport validate_conditions(const Graph& g, const BlockPartition& part, const BreakPointSet& bp,
                                     const WeightParams& p, const ValidationOptions& opts = {});

/// Heavy path check for one block from one boundary vertex, exhaustive.
/// Returns the first path found with weight above 1, or an empty vector.
std::vector<Vertex> find_heavy_entry_path(const Graph& g, std::span<const Vertex> block, Vertex entry,
                                          const WeightParams& p);

/// Replaces every block rejected by `keep` with singleton blocks.
struct ShatterResult {
    BlockPartition partition;
    std::size_t shattered_blocks = 0;
    std::size_t shattered_vertices = 0;
};
ShatterResult shatter_blocks(const Graph& g, const BlockPartition& part,
                             const std::function<bool(const BlockPartition&, std::size_t)>& keep);

nlohmann::json to_json(const BlockPartition& part);
nlohmann::json block_stats(const BlockPartition& part);
nlohmann::json to_json(const ValidationReport& report);

}  // namespace glauber

#endif  // GLAUBER_BLOCKS_HPP
