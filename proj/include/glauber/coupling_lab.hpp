#ifndef GLAUBER_COUPLING_LAB_HPP
#define GLAUBER_COUPLING_LAB_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"

#include "glauber/dynamics.hpp"

namespace glauber {

/// 2/(k - (1+alpha)d) for degree <= (1+alpha)d, otherwise 1. Throws
/// std::invalid_argument on the light branch when k <= (1+alpha)d; the value
/// is capped at 1.
double rho_colour(std::size_t degree, int k, double d, double alpha);

/// lambda/(1+lambda).
double rho_hardcore(double lambda);

/// Per-vertex disagreement probability of the independent percolation that
/// dominates the in-block coupling.
struct DisagreementParams {
    Model model;
    double d = 5.0;
    double alpha = 0.01;

    [[nodiscard]] double rho(std::size_t degree) const;
};

// ---------------------------------------------------------------------------
// Couplings

/// Sum_i min(p_i, q_i).
double overlap(std::span<const double> p, std::span<const double> q);

/// One draw from the maximal coupling of p and q: common value with
/// probability overlap(p, q), otherwise independent draws from the two
/// normalized residuals.
std::pair<Spin, Spin> maximal_coupling(std::span<const double> p, std::span<const double> q, Rng& rng);

/// Law of the spin at v given its neighbours' spins (for singleton blocks).
std::vector<double> vertex_law(const Graph& g, Vertex v, std::span<const Spin> spins, const Model& model);

/// Coupled redraw of one block in two chains. Vertices are drawn one at a
/// time from their exact conditional laws (given the outside and the
/// already drawn block vertices) through a maximal coupling; a vertex next
/// to a current disagreement always goes first. Once no undrawn vertex sees
/// a disagreement the remaining laws coincide and both sides share draws.
/// Each side on its own is an exact block update.
class Coupler {
  public:
    explicit Coupler(const BlockChain& chain);

    /// Coupled update of block b; returns the number of block vertices that
    /// disagree afterwards.
    std::size_t update(std::size_t b, std::span<Spin> x, std::span<Spin> y, Rng& rng) const;

    /// Same block drawn uniformly for both chains; returns its index.
    std::size_t step(std::span<Spin> x, std::span<Spin> y, Rng& rng) const;

    [[nodiscard]] const BlockChain& chain() const { return *chain_; }

  private:
    const BlockChain* chain_;
    mutable std::vector<Spin> cx_, cy_;
    mutable std::vector<std::uint8_t> done_;
};

/// Convenience wrapper over Coupler::step.
std::size_t coupled_step(const BlockChain& chain, std::span<Spin> x, std::span<Spin> y, Rng& rng);

// ---------------------------------------------------------------------------
// Contraction

/// Position of the disagreeing vertex w relative to the partition.
/// Case1: w has no neighbour outside its block. Case2: w sits in a
/// multi-vertex block and has outside neighbours. Case3: w is a singleton
/// block with neighbours.
enum class PositionCase { Case1 = 0, Case2 = 1, Case3 = 2 };

PositionCase position_case(const BlockChain& chain, Vertex w);

/// Picks w uniformly among vertices that admit another legal spin and draws
/// that spin uniformly among the legal alternatives. Returns nullopt after
/// `attempts` rejections.
std::optional<std::pair<Vertex, Spin>> perturbation(const Graph& g, std::span<const Spin> spins, const Model& model,
                                                    Rng& rng, std::size_t attempts = 1'000'000);

struct ContractionOptions {
    /// Default burn-in is 10 n ln n transitions.
    std::optional<std::uint64_t> burn_in;
    /// Extra plain transitions between trials.
    std::uint64_t thin = 1;
    /// Rao-Blackwellized estimator: averages the coupled outcome over the
    /// block choice instead of drawing one block.
    bool averaged = false;
};

struct ContractionReport {
    std::uint64_t trials = 0;
    std::size_t n = 0;
    std::size_t blocks = 0;
    bool averaged = false;
    double sum_h = 0.0;
    double sum_h2 = 0.0;
    std::array<std::uint64_t, 3> case_trials{};
    std::array<double, 3> case_sum_h{};
    /// Disagreements inside a multi-vertex block updated next to a Case-3 w.
    std::uint64_t rb_samples = 0;
    double rb_sum = 0.0;

    [[nodiscard]] double mean_hamming() const { return trials ? sum_h / static_cast<double>(trials) : 0.0; }
    [[nodiscard]] double std_error() const;
    [[nodiscard]] double mean_rb() const { return rb_samples ? rb_sum / static_cast<double>(rb_samples) : 0.0; }
    void merge(const ContractionReport& other);
};

/// Repeatedly perturbs the current chain state at one vertex, applies a
/// coupled transition and records H(X1, Y1); X1 continues the chain.
ContractionReport estimate_contraction(const BlockChain& chain, std::uint64_t trials, Rng& rng,
                                       const ContractionOptions& opts = {});

/// `jobs` independent chains, chain j seeded with seed + j, trials split
/// evenly; reports merged by summation.
ContractionReport estimate_contraction_parallel(const BlockChain& chain, std::uint64_t trials, std::uint64_t seed,
                                                std::size_t jobs, const ContractionOptions& opts = {});

struct RateEstimate {
    std::uint64_t samples = 0;
    double sum = 0.0;
    double sum2 = 0.0;
    [[nodiscard]] double mean() const { return samples ? sum / static_cast<double>(samples) : 0.0; }
    [[nodiscard]] double std_error() const;
};

/// Disagreement frequency of coupled single-vertex updates of a singleton
/// neighbour u of a freshly perturbed w. `accept(u)` filters the measured
/// neighbours (e.g. light vertices only).
RateEstimate single_vertex_disagreement(const BlockChain& chain, std::uint64_t samples, Rng& rng,
                                        const std::function<bool(Vertex)>& accept, std::uint64_t burn_in,
                                        std::uint64_t thin = 1);

/// Mean number of disagreements R_B produced inside block b by a coupled
/// update when the chains differ only at w (a vertex outside b). The state
/// is refreshed by `thin` plain transitions between samples.
RateEstimate block_disagreement(const BlockChain& chain, std::size_t b, Vertex w, std::uint64_t samples, Rng& rng,
                                std::uint64_t burn_in, std::uint64_t thin = 1);

// ---------------------------------------------------------------------------
// Self-avoiding walks

struct SawTree {
    std::vector<Vertex> vertex;         // block vertex of each node
    std::vector<std::int32_t> parent;   // -1 at the root; parents precede children
    std::vector<std::uint32_t> level;

    [[nodiscard]] std::size_t size() const { return vertex.size(); }
    [[nodiscard]] std::size_t depth() const;
    [[nodiscard]] std::vector<std::size_t> level_counts() const;
};

/// Tree of self-avoiding walks of the block's induced subgraph from root.
/// Throws std::invalid_argument if root is not in the block and
/// std::length_error beyond max_nodes nodes.
SawTree saw_tree(const Graph& g, std::span<const Vertex> block, Vertex root, std::size_t max_nodes = 1u << 22);

struct DisagreementExpectation {
    std::vector<double> per_level;
    double total = 0.0;
};

/// E[Z_i] = sum over level-i nodes of the product of rho along the root path.
DisagreementExpectation disagreement_expectation(const SawTree& tree, const std::function<double(Vertex)>& rho);
DisagreementExpectation disagreement_expectation(const Graph& g, const SawTree& tree, const DisagreementParams& params);

// ---------------------------------------------------------------------------
// Weight growth along trees

/// Rooted tree with a degree label per node; parents precede children.
struct GrowthTree {
    std::vector<std::int32_t> parent;
    std::vector<double> delta;
    [[nodiscard]] std::size_t size() const { return parent.size(); }
};

/// SAW tree labelled with graph degrees.
GrowthTree growth_tree(const Graph& g, const SawTree& tree);

struct GrowthParams {
    double p = 0.0;
    double s = 1.0;
    double delta = 1.0;
    double zeta = 0.0;
    double theta = 0.0;
};

/// min{1 - ps(1+zeta), 1 - (ps)^{9/10}}.
double growth_theta(double p, double s, double zeta);

/// Colouring: each path node contributes p when light (delta <= s), 1 when
/// heavy. Hardcore: every node contributes p and the hypothesis is vacuous.
enum class GrowthWeight { Colouring, Hardcore };

struct GrowthViolation {
    enum class Kind { Hypothesis, Conclusion } kind;
    std::size_t index;  // node for Hypothesis, level for Conclusion
    double log_lhs;
    double log_rhs;
};

struct GrowthVerdict {
    bool hypothesis_holds = true;
    bool conclusion_holds = true;
    std::optional<GrowthViolation> first_violation;
    std::vector<double> log_level_sums;
};

/// Checks the path-product hypothesis at every heavy node, then the
/// level-sum bound sum_{v in l_i} C(L_v) <= p (1-theta)^i at every level.
/// Everything is compared in log space with 1e-12 slack.
GrowthVerdict check_growth_bound(const GrowthTree& tree, const GrowthParams& params,
                                 GrowthWeight weight = GrowthWeight::Colouring);

nlohmann::json to_json(const ContractionReport& report);
nlohmann::json to_json(const DisagreementExpectation& e);
nlohmann::json to_json(const GrowthVerdict& v);

}  // namespace glauber

#endif  // GLAUBER_COUPLING_LAB_HPP
