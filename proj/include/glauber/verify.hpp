#ifndef GLAUBER_VERIFY_HPP
#define GLAUBER_VERIFY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "glauber/blocks.hpp"
#include "glauber/dynamics.hpp"
#include "glauber/exact_gibbs.hpp"
#include "glauber/weighting.hpp"

namespace glauber {

/// Canonical integer code of a configuration: colourings as base-k digits
/// in vertex order (vertex 0 most significant), hard-core as the bitmask of
/// occupied vertices (bit v for vertex v).
using StateCode = std::uint64_t;

StateCode encode(std::span<const Spin> spins, const Model& model);
std::vector<Spin> decode(StateCode code, std::size_t n, const Model& model);
/// Human-readable key: digit string, or the sorted occupied-id list.
std::string code_string(StateCode code, std::size_t n, const Model& model);

/// Finite law over configuration codes; support sorted and distinct.
struct DiscreteLaw {
    std::vector<StateCode> support;
    std::vector<double> probability;

    [[nodiscard]] std::size_t size() const { return support.size(); }
    [[nodiscard]] double at(StateCode code) const;
    /// Index of code in support or SIZE_MAX.
    [[nodiscard]] std::size_t find(StateCode code) const;
};

using ExactLaw = DiscreteLaw;

struct EnumerationLimits {
    double max_colourings_space = 1e8;  // k^n
    double max_hardcore_space = 1e7;    // 2^n
};

/// Exact Gibbs law by backtracking over vertex order. Throws
/// std::invalid_argument when k^n or 2^n exceeds the limits or the space is
/// empty.
ExactLaw enumerate_gibbs(const Graph& g, const Model& model, const EnumerationLimits& limits = {});

/// Hard-core partition function by enumeration.
double hardcore_partition(const Graph& g, double lambda, const EnumerationLimits& limits = {});

DiscreteLaw empirical_law(std::span<const StateCode> samples);

/// Incrementally built frequency table.
class EmpiricalCounter {
  public:
    void add(StateCode code, std::uint64_t times = 1);
    [[nodiscard]] std::uint64_t total() const { return total_; }
    [[nodiscard]] DiscreteLaw law() const;

  private:
    std::vector<StateCode> codes_;
    std::uint64_t total_ = 0;
};

/// Half the L1 distance; atoms missing from one side count as 0 there.
double tv_distance(const DiscreteLaw& p, const DiscreteLaw& q);

/// Expected TV distance between a law with `atoms` roughly uniform atoms
/// and its empirical version from `samples` draws: sqrt(atoms/(2 pi samples)).
double tv_noise_floor(std::size_t atoms, std::uint64_t samples);
/// Same, exact in the normal approximation for a given law:
/// sum_i sqrt(p_i (1-p_i) / (2 pi N)).
/// Both are capped at 1; past that point the normal approximation has broken down.
double tv_noise_floor(const DiscreteLaw& law, std::uint64_t samples);

/// Brute-force kernel of block dynamics over the enumerated state space.
/// For block b the states are grouped by their spins outside b; within a
/// group the kernel moves to y with probability w(y) / (group mass), where w
/// is the unnormalized Gibbs weight. The full kernel averages over blocks.
class BruteKernel {
  public:
    BruteKernel(const Graph& g, const BlockPartition& part, const Model& model, const EnumerationLimits& limits = {});

    [[nodiscard]] const ExactLaw& stationary() const { return pi_; }
    [[nodiscard]] std::size_t states() const { return pi_.size(); }

    /// Row of the transition matrix from state index x (sorted by target).
    [[nodiscard]] std::vector<std::pair<std::size_t, double>> row(std::size_t x) const;
    /// The same row as a law over codes.
    [[nodiscard]] DiscreteLaw row_law(StateCode code) const;

    struct BalanceReport {
        double max_defect = 0.0;     // max |pi_x P_xy - pi_y P_yx|
        std::uint64_t pairs_checked = 0;
        std::uint64_t groups_sampled = 0;  // groups too large for all pairs
        std::uint64_t nonzeros = 0;        // of the full matrix
    };
    /// Detailed balance over all pairs inside each group when the group has
    /// at most pair_budget pairs, else over pair_budget random pairs of it.
    [[nodiscard]] BalanceReport detailed_balance(std::uint64_t pair_budget = 1'000'000, std::uint64_t seed = 1) const;

    /// True when every state reaches every other (union of all groups is
    /// connected).
    [[nodiscard]] bool irreducible() const;

  private:
    ExactLaw pi_;
    std::vector<double> weight_;  // unnormalized
    std::size_t blocks_ = 0;
    // per block: group of each state, CSR members and mass per group
    std::vector<std::vector<std::uint32_t>> group_of_;
    std::vector<std::vector<std::uint32_t>> member_offsets_;
    std::vector<std::vector<std::uint32_t>> members_;
    std::vector<std::vector<double>> mass_;
};

struct TailEstimate {
    double estimate = 0.0;
    double asymptotic_bound = 0.0;  // exp(-d^{4/5} (len + ln delta))
    std::uint64_t trials = 0;
};

/// Monte Carlo Pr[prod_{u in P} W(u) >= delta] for a path of path_len
/// vertices with degrees Binomial(n, q) plus the path's own edges (one for
/// an endpoint, two inside). q defaults to d/n; a negative edge_prob means
/// d/n.
TailEstimate weight_tail_estimate(std::size_t n, const WeightParams& params, std::size_t path_len, double delta,
                                  std::uint64_t trials, Rng& rng, double edge_prob = -1.0);

nlohmann::json to_json(const DiscreteLaw& law, std::size_t n, const Model& model);
nlohmann::json to_json(const TailEstimate& t);

}  // namespace glauber

#endif  // GLAUBER_VERIFY_HPP
