#include "glauber/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

namespace glauber {

namespace {

void check_code_space(std::size_t n, const Model& model, const EnumerationLimits& limits) {
    const double nn = static_cast<double>(n);
    if (const auto* c = std::get_if<ColouringModel>(&model)) {
        if (std::pow(static_cast<double>(c->k), nn) > limits.max_colourings_space)
            throw std::invalid_argument("enumeration: k^n exceeds the enumeration limit");
    } else if (std::pow(2.0, nn) > limits.max_hardcore_space) {
        throw std::invalid_argument("enumeration: 2^n exceeds the enumeration limit");
    }
}

}  // namespace

StateCode encode(std::span<const Spin> spins, const Model& model) {
    StateCode code = 0;
    if (const auto* c = std::get_if<ColouringModel>(&model)) {
        for (Spin s : spins) code = code * static_cast<StateCode>(c->k) + static_cast<StateCode>(s);
        return code;
    }
    for (std::size_t v = 0; v < spins.size(); ++v)
        if (spins[v] == 1) code |= StateCode{1} << v;
    return code;
}

std::vector<Spin> decode(StateCode code, std::size_t n, const Model& model) {
    std::vector<Spin> spins(n, 0);
    if (const auto* c = std::get_if<ColouringModel>(&model)) {
        for (std::size_t i = n; i-- > 0;) {
            spins[i] = static_cast<Spin>(code % static_cast<StateCode>(c->k));
            code /= static_cast<StateCode>(c->k);
        }
        return spins;
    }
    for (std::size_t v = 0; v < n; ++v) spins[v] = static_cast<Spin>((code >> v) & 1U);
    return spins;
}

std::string code_string(StateCode code, std::size_t n, const Model& model) {
    const auto spins = decode(code, n, model);
    std::string out;
    if (std::holds_alternative<ColouringModel>(model)) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i) out += ',';
            out += std::to_string(spins[i]);
        }
        return out;
    }
    out = "{";
    bool first = true;
    for (std::size_t v = 0; v < n; ++v) {
        if (spins[v] != 1) continue;
        if (!first) out += ',';
        out += std::to_string(v);
        first = false;
    }
    return out + "}";
}

double DiscreteLaw::at(StateCode code) const {
    const std::size_t i = find(code);
    return i == SIZE_MAX ? 0.0 : probability[i];
}

std::size_t DiscreteLaw::find(StateCode code) const {
    auto it = std::lower_bound(support.begin(), support.end(), code);
    return (it != support.end() && *it == code) ? static_cast<std::size_t>(it - support.begin()) : SIZE_MAX;
}

ExactLaw enumerate_gibbs(const Graph& g, const Model& model, const EnumerationLimits& limits) {
    validate_model(model);
    const std::size_t n = g.vertex_count();
    check_code_space(n, model, limits);
    const int q = spin_count(model);
    const double lambda = std::holds_alternative<HardcoreModel>(model) ? std::get<HardcoreModel>(model).lambda : 1.0;

    std::vector<std::pair<StateCode, double>> found;
    std::vector<Spin> spins(n, kUnassigned);
    // depth-first over vertex order, checking edges to earlier vertices
    std::size_t depth = 0;
    if (n == 0) {
        found.emplace_back(0, 1.0);
    } else {
        spins[0] = -1;
        while (true) {
            ++spins[depth];
            if (spins[depth] >= q) {
                spins[depth] = kUnassigned;
                if (depth == 0) break;
                --depth;
                continue;
            }
            bool ok = true;
            for (Vertex u : g.neighbours(static_cast<Vertex>(depth))) {
                if (u >= depth) continue;
                if (std::holds_alternative<ColouringModel>(model) ? spins[u] == spins[depth]
                                                                   : (spins[u] == 1 && spins[depth] == 1)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            if (depth + 1 == n) {
                int occupied = 0;
                for (Spin s : spins) occupied += s == 1 ? 1 : 0;
                const double w = std::holds_alternative<ColouringModel>(model) ? 1.0 : std::pow(lambda, occupied);
                found.emplace_back(encode(spins, model), w);
                continue;
            }
            ++depth;
            spins[depth] = -1;
        }
    }
    if (found.empty()) throw std::invalid_argument("enumeration: the configuration space is empty");
    std::sort(found.begin(), found.end());
    ExactLaw law;
    double z = 0.0;
    for (auto& [code, w] : found) z += w;
    for (auto& [code, w] : found) {
        law.support.push_back(code);
        law.probability.push_back(w / z);
    }
    return law;
}

double hardcore_partition(const Graph& g, double lambda, const EnumerationLimits& limits) {
    const Model model = HardcoreModel{lambda};
    const ExactLaw law = enumerate_gibbs(g, model, limits);
    // Z = 1 / P[empty set]
    return 1.0 / law.at(0);
}

DiscreteLaw empirical_law(std::span<const StateCode> samples) {
    if (samples.empty()) throw std::invalid_argument("empirical_law: no samples");
    EmpiricalCounter c;
    for (StateCode s : samples) c.add(s);
    return c.law();
}

void EmpiricalCounter::add(StateCode code, std::uint64_t times) {
    for (std::uint64_t i = 0; i < times; ++i) codes_.push_back(code);
    total_ += times;
}

DiscreteLaw EmpiricalCounter::law() const {
    if (total_ == 0) throw std::invalid_argument("empirical_law: no samples");
    std::vector<StateCode> sorted = codes_;
    std::sort(sorted.begin(), sorted.end());
    DiscreteLaw law;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        law.support.push_back(sorted[i]);
        law.probability.push_back(static_cast<double>(j - i) / static_cast<double>(total_));
        i = j;
    }
    return law;
}

double tv_distance(const DiscreteLaw& p, const DiscreteLaw& q) {
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < p.size() || j < q.size()) {
        if (j == q.size() || (i < p.size() && p.support[i] < q.support[j])) {
            s += std::abs(p.probability[i++]);
        } else if (i == p.size() || q.support[j] < p.support[i]) {
            s += std::abs(q.probability[j++]);
        } else {
            s += std::abs(p.probability[i++] - q.probability[j++]);
        }
    }
    return 0.5 * s;
}

double tv_noise_floor(std::size_t atoms, std::uint64_t samples) {
    return std::min(1.0, std::sqrt(static_cast<double>(atoms) / (2.0 * std::numbers::pi * static_cast<double>(samples))));
}

double tv_noise_floor(const DiscreteLaw& law, std::uint64_t samples) {
    double s = 0.0;
    for (double p : law.probability) s += std::sqrt(p * (1.0 - p));
    return std::min(1.0, s / std::sqrt(2.0 * std::numbers::pi * static_cast<double>(samples)));
}

// ---------------------------------------------------------------------------

BruteKernel::BruteKernel(const Graph& g, const BlockPartition& part, const Model& model,
                         const EnumerationLimits& limits)
    : pi_(enumerate_gibbs(g, model, limits)), blocks_(part.size()) {
    const std::size_t n = g.vertex_count();
    const std::size_t S = pi_.size();
    weight_.resize(S);
    for (std::size_t i = 0; i < S; ++i) weight_[i] = pi_.probability[i] / pi_.probability[0];

    group_of_.resize(blocks_);
    member_offsets_.resize(blocks_);
    members_.resize(blocks_);
    mass_.resize(blocks_);
    for (std::size_t b = 0; b < blocks_; ++b) {
        std::unordered_map<StateCode, std::uint32_t> ids;
        auto& group = group_of_[b];
        group.resize(S);
        for (std::size_t x = 0; x < S; ++x) {
            auto spins = decode(pi_.support[x], n, model);
            for (Vertex v : part.blocks[b]) spins[v] = 0;
            const StateCode key = encode(spins, model);
            auto [it, fresh] = ids.try_emplace(key, static_cast<std::uint32_t>(ids.size()));
            group[x] = it->second;
        }
        const std::size_t G = ids.size();
        auto& off = member_offsets_[b];
        off.assign(G + 1, 0);
        for (std::size_t x = 0; x < S; ++x) ++off[group[x] + 1];
        std::partial_sum(off.begin(), off.end(), off.begin());
        auto& mem = members_[b];
        mem.resize(S);
        std::vector<std::uint32_t> fill(off.begin(), off.end() - 1);
        for (std::size_t x = 0; x < S; ++x) mem[fill[group[x]]++] = static_cast<std::uint32_t>(x);
        auto& mass = mass_[b];
        mass.assign(G, 0.0);
        for (std::size_t x = 0; x < S; ++x) mass[group[x]] += weight_[x];
    }
}

std::vector<std::pair<std::size_t, double>> BruteKernel::row(std::size_t x) const {
    std::vector<std::pair<std::size_t, double>> entries;
    const double inv_n = 1.0 / static_cast<double>(blocks_);
    for (std::size_t b = 0; b < blocks_; ++b) {
        const std::uint32_t gx = group_of_[b][x];
        for (std::uint32_t i = member_offsets_[b][gx]; i < member_offsets_[b][gx + 1]; ++i) {
            const std::uint32_t y = members_[b][i];
            entries.emplace_back(y, inv_n * weight_[y] / mass_[b][gx]);
        }
    }
    std::sort(entries.begin(), entries.end());
    std::vector<std::pair<std::size_t, double>> merged;
    for (const auto& e : entries) {
        if (!merged.empty() && merged.back().first == e.first)
            merged.back().second += e.second;
        else
            merged.push_back(e);
    }
    return merged;
}

DiscreteLaw BruteKernel::row_law(StateCode code) const {
    const std::size_t x = pi_.find(code);
    if (x == SIZE_MAX) throw std::invalid_argument("row_law: state not in the support");
    DiscreteLaw law;
    for (auto [y, p] : row(x)) {
        law.support.push_back(pi_.support[y]);
        law.probability.push_back(p);
    }
    return law;
}

BruteKernel::BalanceReport BruteKernel::detailed_balance(std::uint64_t pair_budget, std::uint64_t seed) const {
    BalanceReport rep;
    Rng rng(seed);
    const double inv_n = 1.0 / static_cast<double>(blocks_);
    auto defect = [&](std::size_t b, std::uint32_t g, std::uint32_t x, std::uint32_t y) {
        const double pxy = inv_n * weight_[y] / mass_[b][g];
        const double pyx = inv_n * weight_[x] / mass_[b][g];
        return std::abs(pi_.probability[x] * pxy - pi_.probability[y] * pyx);
    };
    for (std::size_t b = 0; b < blocks_; ++b) {
        const auto& off = member_offsets_[b];
        const auto& mem = members_[b];
        for (std::uint32_t g = 0; g + 1 < off.size(); ++g) {
            const std::uint64_t size = off[g + 1] - off[g];
            rep.nonzeros += size * size;
            const std::uint64_t pairs = size * (size - 1) / 2;
            if (pairs <= pair_budget) {
                for (std::uint32_t i = off[g]; i < off[g + 1]; ++i)
                    for (std::uint32_t j = i + 1; j < off[g + 1]; ++j)
                        rep.max_defect = std::max(rep.max_defect, defect(b, g, mem[i], mem[j]));
                rep.pairs_checked += pairs;
            } else {
                ++rep.groups_sampled;
                for (std::uint64_t t = 0; t < pair_budget; ++t) {
                    const auto i = off[g] + static_cast<std::uint32_t>(uniform_index(rng, size));
                    const auto j = off[g] + static_cast<std::uint32_t>(uniform_index(rng, size));
                    rep.max_defect = std::max(rep.max_defect, defect(b, g, mem[i], mem[j]));
                }
                rep.pairs_checked += pair_budget;
            }
        }
    }
    return rep;
}

bool BruteKernel::irreducible() const {
    const std::size_t S = pi_.size();
    std::vector<std::uint32_t> parent(S);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::uint32_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    std::size_t components = S;
    for (std::size_t b = 0; b < blocks_; ++b) {
        const auto& off = member_offsets_[b];
        const auto& mem = members_[b];
        for (std::size_t g = 0; g + 1 < off.size(); ++g) {
            for (std::uint32_t i = off[g] + 1; i < off[g + 1]; ++i) {
                const auto ra = find(mem[off[g]]);
                const auto rb = find(mem[i]);
                if (ra != rb) {
                    parent[rb] = ra;
                    --components;
                }
            }
        }
    }
    return components == 1;
}

// ---------------------------------------------------------------------------

namespace {

// Inversion sampling; the mean stays small so the walk is short.
std::size_t binomial(std::size_t n, double q, Rng& rng) {
    if (q <= 0.0 || n == 0) return 0;
    if (q >= 1.0) return n;
    const double u = uniform01(rng);
    double pmf = std::pow(1.0 - q, static_cast<double>(n));
    if (pmf > 0.0) {
        double cdf = pmf;
        std::size_t k = 0;
        const double ratio = q / (1.0 - q);
        while (u >= cdf && k < n) {
            pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
            ++k;
            cdf += pmf;
        }
        return k;
    }
    std::size_t k = 0;  // underflow guard: plain Bernoulli trials
    for (std::size_t i = 0; i < n; ++i)
        if (uniform01(rng) < q) ++k;
    return k;
}

}  // namespace

TailEstimate weight_tail_estimate(std::size_t n, const WeightParams& params, std::size_t path_len, double delta,
                                  std::uint64_t trials, Rng& rng, double edge_prob) {
    if (path_len < 1) throw std::invalid_argument("weight_tail_estimate: path_len must be at least 1");
    if (trials < 1) throw std::invalid_argument("weight_tail_estimate: trials must be at least 1");
    if (!(delta > 0.0)) throw std::invalid_argument("weight_tail_estimate: delta must be positive");
    const double q = edge_prob < 0.0 ? params.d / static_cast<double>(n) : edge_prob;
    const double log_delta = std::log(delta);
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        double log_c = 0.0;
        for (std::size_t i = 0; i < path_len; ++i) {
            const std::size_t own = path_len == 1 ? 0 : (i == 0 || i + 1 == path_len ? 1 : 2);
            log_c += vertex_weight(binomial(n, q, rng) + own, params).log;
        }
        if (log_c >= log_delta) ++hits;
    }
    TailEstimate out;
    out.trials = trials;
    out.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    out.asymptotic_bound = std::exp(-std::pow(params.d, 0.8) * (static_cast<double>(path_len) + log_delta));
    return out;
}

nlohmann::json to_json(const DiscreteLaw& law, std::size_t n, const Model& model) {
    nlohmann::json atoms = nlohmann::json::array();
    for (std::size_t i = 0; i < law.size(); ++i)
        atoms.push_back({{"state", code_string(law.support[i], n, model)}, {"probability", law.probability[i]}});
    return {{"atoms", atoms}, {"size", law.size()}};
}

nlohmann::json to_json(const TailEstimate& t) {
    return {{"trials", t.trials}, {"estimate", t.estimate}, {"asymptotic_bound", t.asymptotic_bound}};
}

}  // namespace glauber
