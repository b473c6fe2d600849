#include "glauber/exact_gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace glauber {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ColourPolicy {
    int q;
    [[nodiscard]] int states() const { return q; }
    [[nodiscard]] double potential(Spin) const { return 1.0; }
    [[nodiscard]] double log_potential(Spin) const { return 0.0; }
    // Clears the states of a vertex ruled out by a neighbour holding `nb`.
    void forbid(double* val, Spin nb) const {
        if (nb >= 0 && nb < q) val[nb] = 0.0;
    }
    [[nodiscard]] bool conflicts(Spin s, Spin nb) const { return nb >= 0 && s == nb; }
    [[nodiscard]] bool compatible(Spin a, Spin b) const { return a != b; }
    // Sum of a normalized child message over child states compatible with s.
    [[nodiscard]] double incoming(const double* child, Spin s) const { return 1.0 - child[s]; }
    [[nodiscard]] double tag() const { return -static_cast<double>(q); }
};

struct HardcorePolicy {
    double lambda;
    [[nodiscard]] int states() const { return 2; }
    [[nodiscard]] double potential(Spin s) const { return s == 1 ? lambda : 1.0; }
    [[nodiscard]] double log_potential(Spin s) const { return s == 1 ? std::log(lambda) : 0.0; }
    void forbid(double* val, Spin nb) const {
        if (nb == 1) val[1] = 0.0;
    }
    [[nodiscard]] bool conflicts(Spin s, Spin nb) const { return s == 1 && nb == 1; }
    [[nodiscard]] bool compatible(Spin a, Spin b) const { return !(a == 1 && b == 1); }
    [[nodiscard]] double incoming(const double* child, Spin s) const { return s == 1 ? child[0] : 1.0; }
    [[nodiscard]] double tag() const { return lambda; }
};

template <class F>
decltype(auto) with_policy(const Model& model, F&& f) {
    if (const auto* c = std::get_if<ColouringModel>(&model)) return f(ColourPolicy{c->k});
    return f(HardcorePolicy{std::get<HardcoreModel>(model).lambda});
}

// Index drawn proportionally to nonnegative weights.
std::size_t draw(std::span<const double> weights, Rng& rng) {
    double total = 0.0;
    for (double w : weights) total += w;
    double target = uniform01(rng) * total;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        last = i;
        if (target < weights[i]) return i;
        target -= weights[i];
    }
    return last;
}

double log_sum_exp(std::span<const double> xs) {
    double hi = kNegInf;
    for (double x : xs) hi = std::max(hi, x);
    if (hi == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - hi);
    return hi + std::log(s);
}

}  // namespace

int spin_count(const Model& model) {
    if (const auto* c = std::get_if<ColouringModel>(&model)) return c->k;
    return 2;
}

void validate_model(const Model& model) {
    if (const auto* c = std::get_if<ColouringModel>(&model)) {
        if (c->k < 1) throw std::invalid_argument("colouring model: k must be at least 1");
    } else if (!(std::get<HardcoreModel>(model).lambda > 0.0)) {
        throw std::invalid_argument("hard-core model: lambda must be positive");
    }
}

bool is_proper_colouring(const Graph& g, std::span<const Spin> spins, int k) {
    if (spins.size() != g.vertex_count()) return false;
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
        if (spins[u] < 0 || spins[u] >= k) return false;
        for (Vertex v : g.neighbours(u))
            if (spins[u] == spins[v]) return false;
    }
    return true;
}

bool is_independent_set(const Graph& g, std::span<const Spin> spins) {
    if (spins.size() != g.vertex_count()) return false;
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
        if (spins[u] != 0 && spins[u] != 1) return false;
        if (spins[u] == 1)
            for (Vertex v : g.neighbours(u))
                if (spins[v] == 1) return false;
    }
    return true;
}

bool is_valid(const Graph& g, const Configuration& config, const Model& model) {
    if (const auto* c = std::get_if<ColouringModel>(&model)) return is_proper_colouring(g, config.spins, c->k);
    return is_independent_set(g, config.spins);
}

// ---------------------------------------------------------------------------
// BlockSampler construction

BlockSampler::BlockSampler(const Graph& g, std::span<const Vertex> block) {
    if (block.empty()) throw std::invalid_argument("BlockSampler: empty block");
    std::vector<Vertex> sorted(block.begin(), block.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("BlockSampler: repeated vertex in block");
    const std::size_t m = sorted.size();
    auto tmp_of = [&](Vertex v) -> std::size_t {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
        return (it != sorted.end() && *it == v) ? static_cast<std::size_t>(it - sorted.begin()) : SIZE_MAX;
    };
    std::vector<std::vector<std::uint32_t>> adj(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (sorted[i] >= g.vertex_count()) throw std::invalid_argument("BlockSampler: vertex out of range");
        for (Vertex u : g.neighbours(sorted[i])) {
            const std::size_t j = tmp_of(u);
            if (j != SIZE_MAX) adj[i].push_back(static_cast<std::uint32_t>(j));
        }
    }

    // Greedy feedback vertex set: strip the 2-core, take its highest-degree
    // vertex (lowest id on ties), repeat until nothing cyclic remains.
    std::vector<std::uint8_t> in_cut(m, 0);
    while (true) {
        std::vector<std::size_t> deg(m, 0);
        std::vector<std::uint8_t> gone(in_cut);
        for (std::size_t i = 0; i < m; ++i)
            if (!gone[i])
                for (auto j : adj[i])
                    if (!in_cut[j]) ++deg[i];
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < m; ++i)
            if (!gone[i] && deg[i] <= 1) stack.push_back(i);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            if (gone[i]) continue;
            gone[i] = 1;
            for (auto j : adj[i])
                if (!gone[j] && --deg[j] <= 1) stack.push_back(j);
        }
        std::size_t pick = SIZE_MAX;
        for (std::size_t i = 0; i < m; ++i)
            if (!gone[i] && (pick == SIZE_MAX || deg[i] > deg[pick])) pick = i;
        if (pick == SIZE_MAX) break;
        in_cut[pick] = 1;
    }

    std::vector<std::size_t> local_order;
    for (std::size_t i = 0; i < m; ++i)
        if (in_cut[i]) local_order.push_back(i);
    cutset_count_ = local_order.size();
    std::vector<std::uint8_t> visited(in_cut);
    std::vector<std::int64_t> tmp_parent(m, -1);
    for (std::size_t s = 0; s < m; ++s) {
        if (visited[s]) continue;
        visited[s] = 1;
        std::size_t head = local_order.size();
        local_order.push_back(s);
        while (head < local_order.size()) {
            const std::size_t i = local_order[head++];
            for (auto j : adj[i]) {
                if (visited[j]) continue;
                visited[j] = 1;
                tmp_parent[j] = static_cast<std::int64_t>(i);
                local_order.push_back(j);
            }
        }
    }

    std::vector<std::uint32_t> local_of(m);
    for (std::size_t l = 0; l < m; ++l) local_of[local_order[l]] = static_cast<std::uint32_t>(l);
    vertices_.resize(m);
    for (std::size_t l = 0; l < m; ++l) vertices_[l] = sorted[local_order[l]];
    index_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) index_.emplace_back(sorted[i], local_of[i]);

    out_offsets_.assign(1, 0);
    cut_offsets_.assign(1, 0);
    forest_offsets_.assign(1, 0);
    base_.parent.assign(m, -1);
    for (std::size_t l = 0; l < m; ++l) {
        const std::size_t i = local_order[l];
        for (Vertex u : g.neighbours(sorted[i]))
            if (tmp_of(u) == SIZE_MAX) outside_.push_back(u);
        out_offsets_.push_back(static_cast<std::uint32_t>(outside_.size()));
        for (auto j : adj[i]) {
            if (in_cut[j]) {
                cut_nbrs_.push_back(local_of[j]);
            } else if (!in_cut[i]) {
                forest_nbrs_.push_back(local_of[j]);
            }
        }
        cut_offsets_.push_back(static_cast<std::uint32_t>(cut_nbrs_.size()));
        forest_offsets_.push_back(static_cast<std::uint32_t>(forest_nbrs_.size()));
        if (tmp_parent[i] >= 0) base_.parent[l] = static_cast<std::int32_t>(local_of[static_cast<std::size_t>(tmp_parent[i])]);
        if (l >= cutset_count_) base_.order.push_back(static_cast<std::uint32_t>(l));
    }
    local_spins_.assign(m, kUnassigned);
    logz_.assign(m, 0.0);
}

std::size_t BlockSampler::local_index(Vertex v) const {
    auto it = std::lower_bound(index_.begin(), index_.end(), std::make_pair(v, std::uint32_t{0}));
    return (it != index_.end() && it->first == v) ? it->second : SIZE_MAX;
}

double BlockSampler::cutset_assignments(const Model& model) const {
    return std::pow(static_cast<double>(spin_count(model)), static_cast<double>(cutset_count_));
}

BlockSampler::Orientation BlockSampler::orient(std::size_t root_override) const {
    if (root_override == SIZE_MAX || root_override < cutset_count_) return base_;
    Orientation o;
    o.parent.assign(size(), -1);
    std::vector<std::uint8_t> visited(size(), 0);
    auto bfs = [&](std::uint32_t root) {
        visited[root] = 1;
        std::size_t head = o.order.size();
        o.order.push_back(root);
        while (head < o.order.size()) {
            const std::uint32_t u = o.order[head++];
            for (std::uint32_t k = forest_offsets_[u]; k < forest_offsets_[u + 1]; ++k) {
                const std::uint32_t w = forest_nbrs_[k];
                if (visited[w]) continue;
                visited[w] = 1;
                o.parent[w] = static_cast<std::int32_t>(u);
                o.order.push_back(w);
            }
        }
    };
    bfs(static_cast<std::uint32_t>(root_override));
    for (std::uint32_t u : base_.order)
        if (!visited[u]) bfs(u);
    return o;
}

// ---------------------------------------------------------------------------
// Dynamic programme

template <class Policy>
bool BlockSampler::cutset_admissible(const Policy& pol, std::span<const Spin> spins, std::span<const Spin> local_spins,
                                     std::span<const Spin> clamps) const {
    for (std::size_t f = 0; f < cutset_count_; ++f) {
        const Spin s = local_spins[f];
        if (!clamps.empty() && clamps[f] != kUnassigned && clamps[f] != s) return false;
        for (std::uint32_t k = out_offsets_[f]; k < out_offsets_[f + 1]; ++k)
            if (pol.conflicts(s, spins[outside_[k]])) return false;
        for (std::uint32_t k = cut_offsets_[f]; k < cut_offsets_[f + 1]; ++k) {
            const std::uint32_t h = cut_nbrs_[k];
            if (h < f && !pol.compatible(s, local_spins[h])) return false;
        }
    }
    return true;
}

template <class Policy>
double BlockSampler::forest_pass(const Policy& pol, std::span<const Spin> spins, std::span<const Spin> local_spins,
                                 std::span<const Spin> clamps, const Orientation& o) const {
    const int q = pol.states();
    msg_.resize(size() * static_cast<std::size_t>(q));
    for (std::uint32_t u : o.order) {
        double* val = msg_.data() + static_cast<std::size_t>(u) * q;
        for (int s = 0; s < q; ++s) val[s] = pol.potential(s);
        if (!clamps.empty() && clamps[u] != kUnassigned) {
            for (int s = 0; s < q; ++s)
                if (s != clamps[u]) val[s] = 0.0;
        }
        for (std::uint32_t k = out_offsets_[u]; k < out_offsets_[u + 1]; ++k) pol.forbid(val, spins[outside_[k]]);
        for (std::uint32_t k = cut_offsets_[u]; k < cut_offsets_[u + 1]; ++k) pol.forbid(val, local_spins[cut_nbrs_[k]]);
        logz_[u] = 0.0;
    }
    double total = 0.0;
    for (auto it = o.order.rbegin(); it != o.order.rend(); ++it) {
        const std::uint32_t u = *it;
        double* val = msg_.data() + static_cast<std::size_t>(u) * q;
        double sum = 0.0;
        for (int s = 0; s < q; ++s) sum += val[s];
        if (!(sum > 0.0)) return kNegInf;
        const double inv = 1.0 / sum;
        for (int s = 0; s < q; ++s) val[s] *= inv;
        logz_[u] += std::log(sum);
        const std::int32_t p = o.parent[u];
        if (p < 0) {
            total += logz_[u];
            continue;
        }
        double* pv = msg_.data() + static_cast<std::size_t>(p) * q;
        for (int s = 0; s < q; ++s)
            if (pv[s] != 0.0) pv[s] *= pol.incoming(val, s);
        logz_[p] += logz_[u];
    }
    return total;
}

namespace {

// Odometer over q^f assignments stored in the first f entries of `spins`.
bool advance(std::span<Spin> spins, std::size_t f, int q) {
    for (std::size_t i = f; i-- > 0;) {
        if (++spins[i] < q) return true;
        spins[i] = 0;
    }
    return false;
}

}  // namespace

template <class Policy>
void BlockSampler::sample_impl(const Policy& pol, std::span<Spin> spins, Rng& rng) const {
    const int q = pol.states();
    std::span<Spin> local(local_spins_);
    const std::span<const Spin> none;

    if (cutset_count_ > 0) {
        // The law of the cut-set spins depends only on the outside spins, so
        // its cumulative weights are memoized per outside pattern.
        key_.clear();
        for (Vertex u : outside_) key_.push_back(spins[u]);
        if (cache_tag_ != pol.tag()) {
            cache_.clear();
            cache_doubles_ = 0;
            cache_tag_ = pol.tag();
        }
        auto it = cache_.find(key_);
        if (it == cache_.end()) {
            std::fill(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(cutset_count_), 0);
            weights_.clear();
            do {
                double lw = kNegInf;
                if (cutset_admissible(pol, spins, local, none)) {
                    lw = forest_pass(pol, spins, local, none, base_);
                    for (std::size_t f = 0; f < cutset_count_; ++f) lw += pol.log_potential(local[f]);
                }
                weights_.push_back(lw);
            } while (advance(local, cutset_count_, q));
            double hi = kNegInf;
            for (double w : weights_) hi = std::max(hi, w);
            if (hi == kNegInf) throw FrozenBlockError("block admits no configuration under its boundary");
            double run = 0.0;
            for (double& w : weights_) w = run += std::exp(w - hi);
            if (cache_doubles_ + weights_.size() > kCacheDoubles) {
                cache_.clear();
                cache_doubles_ = 0;
            }
            cache_doubles_ += weights_.size();
            it = cache_.emplace(key_, weights_).first;
        }
        const std::vector<double>& cum = it->second;
        const double target = uniform01(rng) * cum.back();
        auto pick = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin());
        pick = std::min(pick, cum.size() - 1);
        for (std::size_t f = cutset_count_; f-- > 0;) {
            local[f] = static_cast<Spin>(pick % static_cast<std::size_t>(q));
            pick /= static_cast<std::size_t>(q);
        }
    }
    if (forest_pass(pol, spins, local, none, base_) == kNegInf)
        throw FrozenBlockError("block admits no configuration under its boundary");

    double buf[64];
    std::vector<double> big;
    double* w = buf;
    if (q > 64) {
        big.resize(static_cast<std::size_t>(q));
        w = big.data();
    }
    for (std::uint32_t u : base_.order) {
        const double* m = msg_.data() + static_cast<std::size_t>(u) * q;
        const std::int32_t p = base_.parent[u];
        for (int s = 0; s < q; ++s) w[s] = (p < 0 || pol.compatible(local[static_cast<std::size_t>(p)], s)) ? m[s] : 0.0;
        local[u] = static_cast<Spin>(draw(std::span<const double>(w, static_cast<std::size_t>(q)), rng));
    }
    for (std::size_t l = 0; l < size(); ++l) spins[vertices_[l]] = local[l];
}

template <class Policy>
double BlockSampler::log_partition_impl(const Policy& pol, std::span<const Spin> spins) const {
    const int q = pol.states();
    std::span<Spin> local(local_spins_);
    const std::span<const Spin> none;
    if (cutset_count_ == 0) return forest_pass(pol, spins, local, none, base_);
    std::fill(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(cutset_count_), 0);
    std::vector<double> terms;
    do {
        if (!cutset_admissible(pol, spins, local, none)) continue;
        double lw = forest_pass(pol, spins, local, none, base_);
        for (std::size_t f = 0; f < cutset_count_; ++f) lw += pol.log_potential(local[f]);
        terms.push_back(lw);
    } while (advance(local, cutset_count_, q));
    return log_sum_exp(terms);
}

template <class Policy>
std::vector<double> BlockSampler::marginal_impl(const Policy& pol, std::span<const Spin> spins,
                                                std::span<const Spin> clamps, std::size_t target) const {
    const int q = pol.states();
    const Orientation o = orient(target);
    std::span<Spin> local(local_spins_);
    std::vector<double> log_terms;
    std::vector<std::vector<double>> laws;
    std::fill(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(cutset_count_), 0);
    do {
        if (cutset_count_ > 0 && !cutset_admissible(pol, spins, local, clamps)) continue;
        double lw = forest_pass(pol, spins, local, clamps, o);
        if (lw == kNegInf) continue;
        for (std::size_t f = 0; f < cutset_count_; ++f) lw += pol.log_potential(local[f]);
        std::vector<double> law(static_cast<std::size_t>(q), 0.0);
        if (target < cutset_count_) {
            law[static_cast<std::size_t>(local[target])] = 1.0;
        } else {
            const double* m = msg_.data() + target * static_cast<std::size_t>(q);
            std::copy(m, m + q, law.begin());
        }
        log_terms.push_back(lw);
        laws.push_back(std::move(law));
    } while (cutset_count_ > 0 && advance(local, cutset_count_, q));
    if (log_terms.empty()) throw FrozenBlockError("block admits no configuration under its boundary and clamps");

    double hi = kNegInf;
    for (double x : log_terms) hi = std::max(hi, x);
    std::vector<double> out(static_cast<std::size_t>(q), 0.0);
    double norm = 0.0;
    for (std::size_t i = 0; i < laws.size(); ++i) {
        const double w = std::exp(log_terms[i] - hi);
        norm += w;
        for (int s = 0; s < q; ++s) out[static_cast<std::size_t>(s)] += w * laws[i][static_cast<std::size_t>(s)];
    }
    for (double& x : out) x /= norm;
    return out;
}

BigCount BlockSampler::count_colourings(std::span<const Spin> spins, int k) const {
    if (k < 1) throw std::invalid_argument("count_colourings: k must be at least 1");
    const ColourPolicy pol{k};
    const auto q = static_cast<std::size_t>(k);
    std::vector<Spin> local(size(), 0);
    std::vector<BigCount> cnt(size() * q);
    const std::span<const Spin> none;
    BigCount total = 0;
    do {
        if (cutset_count_ > 0 && !cutset_admissible(pol, spins, local, none)) continue;
        for (std::uint32_t u : base_.order) {
            for (std::size_t s = 0; s < q; ++s) cnt[u * q + s] = 1;
            for (std::uint32_t j = out_offsets_[u]; j < out_offsets_[u + 1]; ++j) {
                const Spin nb = spins[outside_[j]];
                if (nb >= 0 && nb < k) cnt[u * q + static_cast<std::size_t>(nb)] = 0;
            }
            for (std::uint32_t j = cut_offsets_[u]; j < cut_offsets_[u + 1]; ++j)
                cnt[u * q + static_cast<std::size_t>(local[cut_nbrs_[j]])] = 0;
        }
        BigCount product = 1;
        for (auto it = base_.order.rbegin(); it != base_.order.rend(); ++it) {
            const std::uint32_t u = *it;
            BigCount sum = 0;
            for (std::size_t s = 0; s < q; ++s) sum += cnt[u * q + s];
            const std::int32_t p = base_.parent[u];
            if (p < 0) {
                product *= sum;
                continue;
            }
            for (std::size_t s = 0; s < q; ++s) cnt[static_cast<std::size_t>(p) * q + s] *= sum - cnt[u * q + s];
        }
        total += product;
    } while (cutset_count_ > 0 && advance(local, cutset_count_, k));
    return total;
}

double BlockSampler::log_partition(std::span<const Spin> spins, const Model& model) const {
    return with_policy(model, [&](const auto& pol) { return log_partition_impl(pol, spins); });
}

void BlockSampler::sample(std::span<Spin> spins, const Model& model, Rng& rng) const {
    with_policy(model, [&](const auto& pol) { sample_impl(pol, spins, rng); });
}

std::vector<double> BlockSampler::marginal(std::span<const Spin> spins, const Model& model,
                                           std::span<const Spin> clamps, std::size_t local) const {
    if (local >= size()) throw std::out_of_range("BlockSampler::marginal: local index out of range");
    if (!clamps.empty() && clamps.size() != size()) throw std::invalid_argument("BlockSampler::marginal: clamp size mismatch");
    return with_policy(model, [&](const auto& pol) { return marginal_impl(pol, spins, clamps, local); });
}

// ---------------------------------------------------------------------------
// Boundary-map conveniences

namespace {

std::vector<Spin> boundary_spins(const Graph& g, std::span<const Vertex> block, const Boundary& boundary,
                                 const Model& model) {
    std::vector<std::uint8_t> in_block(g.vertex_count(), 0);
    for (Vertex v : block) {
        if (v >= g.vertex_count()) throw std::invalid_argument("block vertex out of range");
        in_block[v] = 1;
    }
    std::vector<Spin> spins(g.vertex_count(), kUnassigned);
    const int q = spin_count(model);
    for (auto [v, s] : boundary) {
        if (v >= g.vertex_count()) throw std::invalid_argument("boundary vertex out of range");
        if (in_block[v]) throw std::invalid_argument("boundary vertex " + std::to_string(v) + " lies inside the block");
        const auto nb = g.neighbours(v);
        if (std::none_of(nb.begin(), nb.end(), [&](Vertex u) { return in_block[u] != 0; }))
            throw std::invalid_argument("boundary vertex " + std::to_string(v) + " is not adjacent to the block");
        if (s < 0 || s >= q) throw std::invalid_argument("boundary spin out of range");
        spins[v] = s;
    }
    if (std::holds_alternative<HardcoreModel>(model)) {
        for (auto [v, s] : boundary) {
            if (s != 1) continue;
            for (Vertex u : g.neighbours(v)) {
                auto it = boundary.find(u);
                if (it != boundary.end() && it->second == 1)
                    throw std::invalid_argument("boundary has adjacent occupied vertices");
            }
        }
    }
    return spins;
}

std::vector<Spin> block_values(std::span<const Vertex> block, std::span<const Spin> spins) {
    std::vector<Spin> out;
    out.reserve(block.size());
    for (Vertex v : block) out.push_back(spins[v]);
    return out;
}

}  // namespace

BigCount count_colourings(const Graph& g, std::span<const Vertex> block, const Boundary& boundary, int k) {
    const auto spins = boundary_spins(g, block, boundary, ColouringModel{k});
    return BlockSampler(g, block).count_colourings(spins, k);
}

std::vector<Spin> sample_block_colouring(const Graph& g, std::span<const Vertex> block, const Boundary& boundary,
                                         int k, Rng& rng) {
    const Model model = ColouringModel{k};
    validate_model(model);
    auto spins = boundary_spins(g, block, boundary, model);
    BlockSampler(g, block).sample(spins, model, rng);
    return block_values(block, spins);
}

std::vector<Spin> sample_block_hardcore(const Graph& g, std::span<const Vertex> block, const Boundary& boundary,
                                        double lambda, Rng& rng) {
    const Model model = HardcoreModel{lambda};
    validate_model(model);
    auto spins = boundary_spins(g, block, boundary, model);
    BlockSampler(g, block).sample(spins, model, rng);
    return block_values(block, spins);
}

double tree_occupation_probability(const Graph& g, std::span<const Vertex> block, const Boundary& boundary,
                                   double lambda, Vertex v) {
    const Model model = HardcoreModel{lambda};
    validate_model(model);
    const auto spins = boundary_spins(g, block, boundary, model);
    std::vector<Vertex> sorted(block.begin(), block.end());
    std::sort(sorted.begin(), sorted.end());
    if (!std::binary_search(sorted.begin(), sorted.end(), v)) throw std::invalid_argument("vertex not in block");
    if (induced_edge_count(g, sorted) + 1 != sorted.size() || induced_components(g, sorted).size() != 1)
        throw std::invalid_argument("tree_occupation_probability: block is not a tree");

    auto inside = [&](Vertex u) { return std::binary_search(sorted.begin(), sorted.end(), u); };
    // Iterative post-order from v.
    std::vector<std::pair<Vertex, Vertex>> order;  // (vertex, parent)
    std::vector<std::pair<Vertex, Vertex>> stack{{v, v}};
    while (!stack.empty()) {
        auto [u, parent] = stack.back();
        stack.pop_back();
        order.emplace_back(u, parent);
        for (Vertex w : g.neighbours(u))
            if (w != parent && inside(w)) stack.emplace_back(w, u);
    }
    std::map<Vertex, double> ratio;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const Vertex u = it->first;
        bool blocked = false;
        double r = lambda;
        for (Vertex w : g.neighbours(u)) {
            if (inside(w)) {
                if (w != it->second) r /= 1.0 + ratio.at(w);
            } else if (spins[w] == 1) {
                blocked = true;
            }
        }
        ratio[u] = blocked ? 0.0 : r;
    }
    const double rv = ratio.at(v);
    return rv / (1.0 + rv);
}

double hardcore_marginal(const Graph& g, std::span<const Vertex> block, const Boundary& boundary, double lambda,
                         Vertex v) {
    std::vector<Vertex> sorted(block.begin(), block.end());
    std::sort(sorted.begin(), sorted.end());
    if (induced_edge_count(g, sorted) + 1 == sorted.size() && induced_components(g, sorted).size() == 1)
        return tree_occupation_probability(g, block, boundary, lambda, v);
    // Unicyclic (or small irregular) blocks: condition on the cut vertices.
    const Model model = HardcoreModel{lambda};
    validate_model(model);
    const auto spins = boundary_spins(g, block, boundary, model);
    BlockSampler sampler(g, block);
    const std::size_t local = sampler.local_index(v);
    if (local == SIZE_MAX) throw std::invalid_argument("vertex not in block");
    return sampler.marginal(spins, model, {}, local)[1];
}

}  // namespace glauber
