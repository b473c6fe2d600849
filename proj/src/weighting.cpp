#include "glauber/weighting.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace glauber {

void WeightParams::validate() const {
    if (!(gamma > 0.0) || !(gamma <= alpha)) throw std::invalid_argument("weight params: need 0 < gamma <= alpha");
    if (!(c > 0.0)) throw std::invalid_argument("weight params: need c > 0");
    if (!(d > 1.0)) throw std::invalid_argument("weight params: need d > 1");
    if (influence_radius < 1) throw std::invalid_argument("weight params: influence_radius must be at least 1");
    if (cycle_cap < 3) throw std::invalid_argument("weight params: cycle_cap must be at least 3");
}

WeightParams WeightParams::derive(double alpha, double gamma, double c, double d, std::size_t n) {
    WeightParams p{alpha, gamma, c, d, 1, 3};
    const double ln_n = n > 0 ? std::log(static_cast<double>(n)) : 0.0;
    if (d > 1.0) {
        p.influence_radius = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(ln_n / std::pow(d, 0.4))));
        const double raw_cap = std::floor(4.0 * ln_n / std::pow(std::log(d), 5.0));
        const double clamped = std::min(static_cast<double>(std::max<std::size_t>(n, 3)), std::max(3.0, raw_cap));
        p.cycle_cap = static_cast<std::size_t>(clamped);
    }
    p.validate();
    return p;
}

LogWeight vertex_weight(std::size_t degree, const WeightParams& p) {
    if (p.is_heavy(degree)) return {p.c * std::log(p.d) + std::log(static_cast<double>(degree))};
    return {-std::log1p(p.gamma)};
}

LogWeight path_weight(const Graph& g, std::span<const Vertex> path, const WeightParams& p) {
    if (path.empty()) throw std::invalid_argument("path_weight: empty path");
    LogWeight w{0.0};
    for (std::size_t i = 0; i < path.size(); ++i) {
        const Vertex v = path[i];
        if (v >= g.vertex_count()) throw std::invalid_argument("path_weight: vertex out of range");
        if (i > 0 && !g.has_edge(path[i - 1], v)) throw std::invalid_argument("path_weight: consecutive vertices not adjacent");
        if (std::find(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(i), v) != path.begin() + static_cast<std::ptrdiff_t>(i)) {
            throw std::invalid_argument("path_weight: path repeats a vertex");
        }
        w = w * vertex_weight(g.degree(v), p);
    }
    return w;
}

namespace {

// Depth-first search for the heaviest path from v. With stop_above_one the
// search returns as soon as some path exceeds weight 1.
LogWeight heaviest_path(const Graph& g, Vertex v, const WeightParams& p, bool stop_above_one) {
    // Largest per-vertex log weight available anywhere, used to bound what an
    // extension of the current prefix could still gain.
    const std::size_t max_deg = g.max_degree();
    const double best_step = std::max(0.0, vertex_weight(max_deg, p).log);

    LogWeight best = vertex_weight(g.degree(v), p);
    if (stop_above_one && !best.at_most_one()) return best;

    std::vector<double> prefix;  // prefix[i] = log weight of path[0..i]
    SelfAvoidingPaths paths(g, v, p.influence_radius);
    while (auto path = paths.next()) {
        const std::size_t len = path->size();
        prefix.resize(len);
        const double here = (len == 1 ? 0.0 : prefix[len - 2]) + vertex_weight(g.degree((*path)[len - 1]), p).log;
        prefix[len - 1] = here;
        if (here > best.log) {
            best.log = here;
            if (stop_above_one && !best.at_most_one()) return best;
        }
        const double remaining = static_cast<double>(p.influence_radius - (len - 1));
        if (here + remaining * best_step <= best.log) paths.prune();
    }
    return best;
}

}  // namespace

LogWeight influence(const Graph& g, Vertex v, const WeightParams& p) {
    if (v >= g.vertex_count()) throw std::out_of_range("influence: vertex out of range");
    return heaviest_path(g, v, p, false);
}

std::size_t BreakPointSet::count() const {
    return static_cast<std::size_t>(std::count(membership.begin(), membership.end(), std::uint8_t{1}));
}

std::vector<Vertex> BreakPointSet::ids() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < membership.size(); ++v)
        if (membership[v]) out.push_back(v);
    return out;
}

std::vector<Vertex> BreakPointSet::complement_ids() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < membership.size(); ++v)
        if (!membership[v]) out.push_back(v);
    return out;
}

BreakPointSet break_points(const Graph& g, const WeightParams& p) {
    BreakPointSet out{std::vector<std::uint8_t>(g.vertex_count(), 0), p};
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        out.membership[v] = heaviest_path(g, v, p, true).at_most_one() ? 1 : 0;
    }
    return out;
}

nlohmann::json to_json(const WeightParams& p) {
    return {{"alpha", p.alpha}, {"gamma", p.gamma}, {"c", p.c}, {"d", p.d},
            {"influence_radius", p.influence_radius}, {"cycle_cap", p.cycle_cap}};
}

nlohmann::json to_json(const BreakPointSet& bp) {
    return {{"params", to_json(bp.params)}, {"break_points", bp.ids()}};
}

}  // namespace glauber
