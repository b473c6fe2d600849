#ifndef GLAUBER_DYNAMICS_HPP
#define GLAUBER_DYNAMICS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "glauber/blocks.hpp"
#include "glauber/exact_gibbs.hpp"
#include "glauber/graph.hpp"
#include "glauber/random.hpp"

namespace glauber {

struct ChainState {
    Configuration config;
    std::uint64_t step_count = 0;
    Rng rng;
};

/// Step budget of a run: T = ceil(ln(1/err) * mix_const * n * ln n), T >= 1.
struct RunPlan {
    Model model;
    double err = std::exp(-1.0);
    double mix_const = 50.0;
    std::uint64_t steps = 1;

    static RunPlan derive(const Model& model, std::size_t n, double err = std::exp(-1.0), double mix_const = 50.0);
    /// T = ceil(ln(1/err) * tau_mix) for a known mixing-time surrogate.
    static RunPlan from_mixing_time(const Model& model, double tau_mix, double err = std::exp(-1.0));
};

class InitialStateError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Smallest-last greedy colouring with colours 0..k-1. Throws
/// std::invalid_argument for k < 2 and InitialStateError when some vertex
/// sees every colour among its already coloured neighbours.
Configuration greedy_initial_colouring(const Graph& g, int k);

/// All vertices unoccupied.
Configuration initial_hardcore(const Graph& g);

Configuration initial_configuration(const Graph& g, const Model& model);

class BlockConstructionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ChainOptions {
    /// Kind-Other blocks are sampled exactly when they have at most this many
    /// vertices and at most max_cutset_assignments spin patterns on their
    /// feedback set. Anything bigger is shattered into singletons, or rejected
    /// when strict is set.
    std::size_t max_other_size = 20;
    double max_cutset_assignments = 1 << 20;
    bool strict = false;
};

/// Block dynamics over a fixed partition with one compiled exact sampler per
/// block. Copyable; copies share nothing mutable.
class BlockChain {
  public:
    BlockChain(const Graph& g, const BlockPartition& part, const Model& model, const ChainOptions& opts = {});

    [[nodiscard]] const Graph& graph() const { return *graph_; }
    [[nodiscard]] const BlockPartition& partition() const { return part_; }
    [[nodiscard]] const Model& model() const { return model_; }
    [[nodiscard]] std::size_t block_count() const { return part_.size(); }
    [[nodiscard]] std::size_t shattered_blocks() const { return shattered_blocks_; }
    [[nodiscard]] std::size_t shattered_vertices() const { return shattered_vertices_; }
    [[nodiscard]] const BlockSampler& sampler(std::size_t b) const { return samplers_[b]; }

    /// Redraws the spins of block b from the exact conditional law.
    void update_block(std::size_t b, std::span<Spin> spins, Rng& rng) const;

    /// One transition: uniform block, exact redraw. Returns the block index.
    std::size_t step(ChainState& state) const;

    /// Runs plan.steps transitions from state (which must be valid).
    void run(ChainState& state, const RunPlan& plan) const;

  private:
    const Graph* graph_;
    BlockPartition part_;
    Model model_;
    std::vector<BlockSampler> samplers_;
    std::size_t shattered_blocks_ = 0;
    std::size_t shattered_vertices_ = 0;
    mutable std::vector<std::uint32_t> stamp_;
    mutable std::uint32_t epoch_ = 0;
};

/// True when `chain` would sample the block exactly as given (no shattering).
bool tractable_block(const Graph& g, const BlockPartition& part, std::size_t b, const Model& model,
                     const ChainOptions& opts);

struct RunReport {
    std::uint64_t steps = 0;
    double wall_seconds = 0.0;
    std::size_t frozen_incidents = 0;
    std::size_t shattered_blocks = 0;
    std::size_t shattered_vertices = 0;
    std::size_t blocks = 0;
};

/// run() from the model's default initial state, timed.
Configuration run_chain(const BlockChain& chain, const RunPlan& plan, Rng& rng, RunReport* report = nullptr);

/// Final configurations of `replicas` independent runs; replica i uses the
/// stream seed + i and starts from `start`. Up to `jobs` replicas run
/// concurrently. `sink`, if given, receives (replica, configuration) in
/// replica order instead of the results being stored.
std::vector<Configuration> run_replicas(
    const BlockChain& chain, const RunPlan& plan, const Configuration& start, std::uint64_t seed,
    std::size_t replicas, std::size_t jobs = 1,
    const std::function<void(std::size_t, const Configuration&)>& sink = nullptr);

nlohmann::json to_json(const Configuration& config, const Model& model);
/// Reads the export format back; validates against the graph.
Configuration configuration_from_json(const nlohmann::json& j, const Graph& g, const Model& model);
nlohmann::json to_json(const RunReport& report);
nlohmann::json to_json(const RunPlan& plan);

}  // namespace glauber

#endif  // GLAUBER_DYNAMICS_HPP
