#ifndef GLAUBER_EXACT_GIBBS_HPP
#define GLAUBER_EXACT_GIBBS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "glauber/graph.hpp"
#include "glauber/random.hpp"

namespace glauber {

using BigCount = boost::multiprecision::cpp_int;

/// Spin of one vertex: a colour in [0, k) or occupancy 0/1. Negative means
/// "unassigned" wherever a partial assignment is accepted.
using Spin = std::int32_t;
inline constexpr Spin kUnassigned = -1;

/// Uniform measure over proper k-colourings.
struct ColouringModel {
    int k = 3;
};

/// Independent sets weighted by lambda^{|sigma|}.
struct HardcoreModel {
    double lambda = 1.0;
};

using Model = std::variant<ColouringModel, HardcoreModel>;

/// Number of spin values of a model (k, or 2 for occupancy).
int spin_count(const Model& model);
/// Throws std::invalid_argument for k < 1 or lambda <= 0.
void validate_model(const Model& model);

/// Total spin assignment over the graph.
struct Configuration {
    std::vector<Spin> spins;
    friend bool operator==(const Configuration&, const Configuration&) = default;
};

bool is_proper_colouring(const Graph& g, std::span<const Spin> spins, int k);
bool is_independent_set(const Graph& g, std::span<const Spin> spins);
bool is_valid(const Graph& g, const Configuration& config, const Model& model);

/// Fixed spins on vertices outside a block.
using Boundary = std::map<Vertex, Spin>;

class FrozenBlockError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Exact conditional Gibbs machinery for one block, compiled once from the
/// block's induced structure.
///
/// A feedback vertex set F of the block is chosen greedily (for a unicyclic
/// block it is the lowest-id cycle vertex); the rest of the block is a
/// forest. Every computation enumerates the admissible spins on F and runs an
/// exact leaf-to-root dynamic program over the forest for each of them.
///
/// Boundary spins are read from a whole-graph spin vector; entries belonging
/// to the block itself are never read. Not thread-safe (scratch buffers).
class BlockSampler {
  public:
    BlockSampler(const Graph& g, std::span<const Vertex> block);

    /// Block vertices in sampling order: F first, then the forest in BFS
    /// order from each tree's lowest-id vertex.
    [[nodiscard]] std::span<const Vertex> order() const { return vertices_; }
    [[nodiscard]] std::size_t size() const { return vertices_.size(); }
    [[nodiscard]] std::size_t cutset_size() const { return cutset_count_; }
    /// Local index of a block vertex in order(), or SIZE_MAX.
    [[nodiscard]] std::size_t local_index(Vertex v) const;

    /// Number of spin assignments of F that every operation enumerates.
    [[nodiscard]] double cutset_assignments(const Model& model) const;

    /// Exact number of proper k-colourings of the block consistent with the
    /// outside spins.
    [[nodiscard]] BigCount count_colourings(std::span<const Spin> spins, int k) const;

    /// Natural log of the block's conditional partition function; -inf when
    /// no admissible configuration exists.
    [[nodiscard]] double log_partition(std::span<const Spin> spins, const Model& model) const;

    /// Redraws the block's spins in `spins` from the exact conditional law.
    /// Throws FrozenBlockError when the block admits no configuration.
    void sample(std::span<Spin> spins, const Model& model, Rng& rng) const;

    /// Law of the spin at local vertex `local` conditioned on the outside
    /// spins and on the block vertices fixed in `clamps` (indexed like
    /// order(), kUnassigned = free). Returns one probability per spin value.
    [[nodiscard]] std::vector<double> marginal(std::span<const Spin> spins, const Model& model,
                                               std::span<const Spin> clamps, std::size_t local) const;

  private:
    struct Orientation {
        std::vector<std::uint32_t> order;   // forest locals, parents first
        std::vector<std::int32_t> parent;   // per local, -1 for roots and F
    };

    Orientation orient(std::size_t root_override) const;

    // One forest pass for a fixed F assignment; returns log weight of the
    // forest (F potentials excluded) or -inf. Leaves normalized messages in
    // msg_ (size * q).
    template <class Policy>
    double forest_pass(const Policy& pol, std::span<const Spin> spins, std::span<const Spin> local_spins,
                       std::span<const Spin> clamps, const Orientation& orient) const;

    template <class Policy>
    bool cutset_admissible(const Policy& pol, std::span<const Spin> spins, std::span<const Spin> local_spins,
                           std::span<const Spin> clamps) const;

    template <class Policy>
    void sample_impl(const Policy& pol, std::span<Spin> spins, Rng& rng) const;

    template <class Policy>
    std::vector<double> marginal_impl(const Policy& pol, std::span<const Spin> spins, std::span<const Spin> clamps,
                                      std::size_t local) const;

    template <class Policy>
    double log_partition_impl(const Policy& pol, std::span<const Spin> spins) const;

    std::vector<Vertex> vertices_;
    std::vector<std::pair<Vertex, std::uint32_t>> index_;  // sorted (global, local)
    std::size_t cutset_count_ = 0;                         // locals [0, cutset_count_) form F
    // CSR lists per local vertex.
    std::vector<std::uint32_t> out_offsets_;
    std::vector<Vertex> outside_;             // outside neighbours (global ids)
    std::vector<std::uint32_t> cut_offsets_;
    std::vector<std::uint32_t> cut_nbrs_;     // neighbours in F (local ids)
    std::vector<std::uint32_t> forest_offsets_;
    std::vector<std::uint32_t> forest_nbrs_;  // forest neighbours of forest vertices (local ids)
    Orientation base_;

    mutable std::vector<double> msg_;
    mutable std::vector<double> logz_;
    mutable std::vector<Spin> local_spins_;
    mutable std::vector<double> weights_;

    struct SpinsHash {
        std::size_t operator()(const std::vector<Spin>& v) const noexcept {
            std::size_t h = 1469598103934665603ULL;
            for (Spin s : v) h = (h ^ static_cast<std::size_t>(s + 1)) * 1099511628211ULL;
            return h;
        }
    };
    static constexpr std::size_t kCacheDoubles = 1u << 14;
    mutable std::unordered_map<std::vector<Spin>, std::vector<double>, SpinsHash> cache_;
    mutable std::size_t cache_doubles_ = 0;
    mutable double cache_tag_ = 0.0;
    mutable std::vector<Spin> key_;
};

// Boundary-map conveniences; each compiles a BlockSampler for the call.
// The boundary keys must lie outside the block and be adjacent to it.

BigCount count_colourings(const Graph& g, std::span<const Vertex> block, const Boundary& boundary, int k);

/// Spins over `block` (in the order given) drawn uniformly from the proper
/// extensions of the boundary.
std::vector<Spin> sample_block_colouring(const Graph& g, std::span<const Vertex> block, const Boundary& boundary,
                                         int k, Rng& rng);

/// Probability that v is occupied under the block's hard-core measure given
/// the boundary.
double hardcore_marginal(const Graph& g, std::span<const Vertex> block, const Boundary& boundary, double lambda,
                         Vertex v);

std::vector<Spin> sample_block_hardcore(const Graph& g, std::span<const Vertex> block, const Boundary& boundary,
                                        double lambda, Rng& rng);

/// Occupation ratio recursion R_u = lambda * prod_children 1 / (1 + R_child)
/// for a tree block rooted at v; returns R_v / (1 + R_v). Boundary-occupied
/// neighbours force R = 0. Throws std::invalid_argument if the block is not
/// a tree.
double tree_occupation_probability(const Graph& g, std::span<const Vertex> block, const Boundary& boundary,
                                   double lambda, Vertex v);

}  // namespace glauber

#endif  // GLAUBER_EXACT_GIBBS_HPP
