#ifndef GLAUBER_WEIGHTING_HPP
#define GLAUBER_WEIGHTING_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"

#include "glauber/graph.hpp"

namespace glauber {

/// Constants of the vertex-weighting schema plus the two length caps used by
/// break-point detection and block creation.
struct WeightParams {
    double alpha = 0.01;   // light/heavy degree threshold slack
    double gamma = 0.01;   // per-light-vertex decay
    double c = 10.0;       // heavy-weight exponent
    double d = 5.0;        // expected degree
    std::size_t influence_radius = 1;
    std::size_t cycle_cap = 3;

    /// Validates the constants and derives both caps for a graph of size n:
    /// influence_radius = max(1, floor(ln n / d^{2/5})),
    /// cycle_cap = min(n, max(3, floor(4 ln n / (ln d)^5))).
    static WeightParams derive(double alpha, double gamma, double c, double d, std::size_t n);

    /// Throws std::invalid_argument unless 0 < gamma <= alpha, c > 0, d > 1.
    void validate() const;

    [[nodiscard]] double heavy_threshold() const { return (1.0 + alpha) * d; }
    [[nodiscard]] bool is_heavy(std::size_t degree) const { return static_cast<double>(degree) > heavy_threshold(); }
};

/// Positive weight held as its natural logarithm; d^c * degree overflows
/// nothing in this form.
struct LogWeight {
    double log = 0.0;

    [[nodiscard]] double value() const { return std::exp(log); }
    /// Compares against 1 with the log-space tolerance used throughout.
    [[nodiscard]] bool at_most_one() const { return log <= kTolerance; }

    static constexpr double kTolerance = 1e-12;

    friend LogWeight operator*(LogWeight a, LogWeight b) { return {a.log + b.log}; }
    friend auto operator<=>(const LogWeight&, const LogWeight&) = default;
};

/// (1+gamma)^{-1} for degree <= (1+alpha)d, otherwise d^c * degree.
LogWeight vertex_weight(std::size_t degree, const WeightParams& p);

/// Product of vertex weights along a self-avoiding, edge-consecutive path.
/// Throws std::invalid_argument for anything that is not such a path.
LogWeight path_weight(const Graph& g, std::span<const Vertex> path, const WeightParams& p);

/// Largest path weight over self-avoiding paths from v of at most
/// influence_radius edges, the length-0 path included.
LogWeight influence(const Graph& g, Vertex v, const WeightParams& p);

struct BreakPointSet {
    std::vector<std::uint8_t> membership;
    WeightParams params;

    [[nodiscard]] bool contains(Vertex v) const { return membership[v] != 0; }
    [[nodiscard]] std::size_t count() const;
    [[nodiscard]] std::vector<Vertex> ids() const;
    [[nodiscard]] std::vector<Vertex> complement_ids() const;
};

/// Vertices whose influence is at most 1.
BreakPointSet break_points(const Graph& g, const WeightParams& p);

nlohmann::json to_json(const WeightParams& p);
nlohmann::json to_json(const BreakPointSet& bp);

}  // namespace glauber

#endif  // GLAUBER_WEIGHTING_HPP
