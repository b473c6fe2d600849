#include "glauber/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>
#include <string>
#include <thread>

namespace glauber {

RunPlan RunPlan::derive(const Model& model, std::size_t n, double err, double mix_const) {
    if (!(err > 0.0 && err < 1.0)) throw std::invalid_argument("RunPlan: err must lie in (0, 1)");
    if (!(mix_const > 0.0)) throw std::invalid_argument("RunPlan: mix_const must be positive");
    const double nn = static_cast<double>(n);
    const double raw = n > 1 ? std::ceil(std::log(1.0 / err) * mix_const * nn * std::log(nn)) : 1.0;
    RunPlan plan{model, err, mix_const, std::max<std::uint64_t>(1, static_cast<std::uint64_t>(raw))};
    return plan;
}

RunPlan RunPlan::from_mixing_time(const Model& model, double tau_mix, double err) {
    if (!(err > 0.0 && err < 1.0)) throw std::invalid_argument("RunPlan: err must lie in (0, 1)");
    if (!(tau_mix > 0.0)) throw std::invalid_argument("RunPlan: tau_mix must be positive");
    // Guard against ln(1/err) * tau landing a hair above an integer.
    const double raw = std::log(1.0 / err) * tau_mix;
    const double rounded = std::round(raw);
    const double steps = std::abs(raw - rounded) < 1e-9 * std::max(1.0, raw) ? rounded : std::ceil(raw);
    return RunPlan{model, err, 0.0, std::max<std::uint64_t>(1, static_cast<std::uint64_t>(steps))};
}

Configuration greedy_initial_colouring(const Graph& g, int k) {
    if (k < 2) throw std::invalid_argument("greedy_initial_colouring: k must be at least 2");
    const std::size_t n = g.vertex_count();
    // Smallest-last order: repeatedly strip a minimum-degree vertex (lowest id
    // on ties); colour in the reverse of the stripping order.
    std::vector<std::size_t> deg(n);
    std::set<std::pair<std::size_t, Vertex>> queue;
    for (Vertex v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        queue.emplace(deg[v], v);
    }
    std::vector<std::uint8_t> removed(n, 0);
    std::vector<Vertex> order;
    order.reserve(n);
    while (!queue.empty()) {
        const Vertex v = queue.begin()->second;
        queue.erase(queue.begin());
        removed[v] = 1;
        order.push_back(v);
        for (Vertex u : g.neighbours(v)) {
            if (removed[u]) continue;
            queue.erase({deg[u], u});
            queue.emplace(--deg[u], u);
        }
    }
    std::reverse(order.begin(), order.end());

    Configuration out{std::vector<Spin>(n, kUnassigned)};
    std::vector<std::size_t> seen(static_cast<std::size_t>(k), SIZE_MAX);
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex v = order[i];
        for (Vertex u : g.neighbours(v))
            if (out.spins[u] >= 0) seen[static_cast<std::size_t>(out.spins[u])] = i;
        Spin c = 0;
        while (c < k && seen[static_cast<std::size_t>(c)] == i) ++c;
        if (c == k)
            throw InitialStateError("greedy colouring: vertex " + std::to_string(v) + " sees all " +
                                    std::to_string(k) + " colours among its coloured neighbours");
        out.spins[v] = c;
    }
    return out;
}

Configuration initial_hardcore(const Graph& g) { return Configuration{std::vector<Spin>(g.vertex_count(), 0)}; }

Configuration initial_configuration(const Graph& g, const Model& model) {
    if (const auto* c = std::get_if<ColouringModel>(&model)) return greedy_initial_colouring(g, c->k);
    return initial_hardcore(g);
}

bool tractable_block(const Graph& g, const BlockPartition& part, std::size_t b, const Model& model,
                     const ChainOptions& opts) {
    if (part.kinds[b] != BlockKind::Other) return true;
    if (part.blocks[b].size() > opts.max_other_size) return false;
    return BlockSampler(g, part.blocks[b]).cutset_assignments(model) <= opts.max_cutset_assignments;
}

BlockChain::BlockChain(const Graph& g, const BlockPartition& part, const Model& model, const ChainOptions& opts)
    : graph_(&g), model_(model) {
    validate_model(model);
    if (part.block_of.size() != g.vertex_count()) throw std::invalid_argument("BlockChain: partition does not match graph");
    std::vector<std::size_t> rejected;
    for (std::size_t b = 0; b < part.size(); ++b)
        if (!tractable_block(g, part, b, model, opts)) rejected.push_back(b);
    if (!rejected.empty() && opts.strict) {
        const std::size_t b = rejected.front();
        throw BlockConstructionError("block " + std::to_string(b) + " of kind Other with " +
                                     std::to_string(part.blocks[b].size()) +
                                     " vertices is beyond the exact-sampling cap");
    }
    if (rejected.empty()) {
        part_ = part;
    } else {
        auto res = shatter_blocks(g, part, [&](const BlockPartition&, std::size_t b) {
            return !std::binary_search(rejected.begin(), rejected.end(), b);
        });
        part_ = std::move(res.partition);
        shattered_blocks_ = res.shattered_blocks;
        shattered_vertices_ = res.shattered_vertices;
    }
    samplers_.reserve(part_.size());
    for (const auto& block : part_.blocks) samplers_.emplace_back(g, block);
    stamp_.assign(static_cast<std::size_t>(spin_count(model)), 0);
}

void BlockChain::update_block(std::size_t b, std::span<Spin> spins, Rng& rng) const {
    const auto& block = part_.blocks[b];
    if (block.size() != 1) {
        samplers_[b].sample(spins, model_, rng);
        return;
    }
    const Vertex v = block.front();
    if (const auto* c = std::get_if<ColouringModel>(&model_)) {
        if (++epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
        int blocked = 0;
        for (Vertex u : graph_->neighbours(v)) {
            const Spin s = spins[u];
            if (s >= 0 && s < c->k && stamp_[static_cast<std::size_t>(s)] != epoch_) {
                stamp_[static_cast<std::size_t>(s)] = epoch_;
                ++blocked;
            }
        }
        const int free = c->k - blocked;
        if (free <= 0) throw FrozenBlockError("vertex " + std::to_string(v) + " has no available colour");
        auto pick = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(free)));
        for (Spin s = 0; s < c->k; ++s) {
            if (stamp_[static_cast<std::size_t>(s)] == epoch_) continue;
            if (pick-- == 0) {
                spins[v] = s;
                return;
            }
        }
        return;
    }
    const double lambda = std::get<HardcoreModel>(model_).lambda;
    for (Vertex u : graph_->neighbours(v)) {
        if (spins[u] == 1) {
            spins[v] = 0;
            return;
        }
    }
    spins[v] = uniform01(rng) < lambda / (1.0 + lambda) ? 1 : 0;
}

std::size_t BlockChain::step(ChainState& state) const {
    const auto b = static_cast<std::size_t>(uniform_index(state.rng, part_.size()));
    update_block(b, state.config.spins, state.rng);
    ++state.step_count;
    return b;
}

void BlockChain::run(ChainState& state, const RunPlan& plan) const {
    if (plan.steps < 1) throw std::invalid_argument("run: plan.steps must be at least 1");
    for (std::uint64_t t = 0; t < plan.steps; ++t) step(state);
}

Configuration run_chain(const BlockChain& chain, const RunPlan& plan, Rng& rng, RunReport* report) {
    const auto t0 = std::chrono::steady_clock::now();
    ChainState state{initial_configuration(chain.graph(), chain.model()), 0, rng};
    RunReport local;
    try {
        chain.run(state, plan);
    } catch (const FrozenBlockError&) {
        ++local.frozen_incidents;
        if (report) *report = local;
        throw;
    }
    rng = state.rng;
    local.steps = state.step_count;
    local.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    local.shattered_blocks = chain.shattered_blocks();
    local.shattered_vertices = chain.shattered_vertices();
    local.blocks = chain.block_count();
    if (report) *report = local;
    return std::move(state.config);
}

std::vector<Configuration> run_replicas(const BlockChain& chain, const RunPlan& plan, const Configuration& start,
                                        std::uint64_t seed, std::size_t replicas, std::size_t jobs,
                                        const std::function<void(std::size_t, const Configuration&)>& sink) {
    std::vector<Configuration> results(replicas);
    jobs = std::max<std::size_t>(1, std::min(jobs, replicas));
    auto worker = [&](std::size_t first) {
        const BlockChain local = chain;  // private scratch buffers
        for (std::size_t i = first; i < replicas; i += jobs) {
            ChainState state{start, 0, replica_rng(seed, i)};
            local.run(state, plan);
            results[i] = std::move(state.config);
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker, t);
        for (auto& t : threads) t.join();
    }
    if (sink) {
        for (std::size_t i = 0; i < replicas; ++i) sink(i, results[i]);
        return {};
    }
    return results;
}

nlohmann::json to_json(const Configuration& config, const Model& model) {
    if (const auto* c = std::get_if<ColouringModel>(&model))
        return {{"model", "colouring"}, {"k", c->k}, {"spins", config.spins}};
    std::vector<Vertex> occupied;
    for (std::size_t v = 0; v < config.spins.size(); ++v)
        if (config.spins[v] == 1) occupied.push_back(static_cast<Vertex>(v));
    return {{"model", "hardcore"}, {"occupied", occupied}};
}

Configuration configuration_from_json(const nlohmann::json& j, const Graph& g, const Model& model) {
    Configuration out;
    const std::string kind = j.at("model").get<std::string>();
    if (std::holds_alternative<ColouringModel>(model)) {
        if (kind != "colouring") throw std::invalid_argument("configuration: expected a colouring");
        out.spins = j.at("spins").get<std::vector<Spin>>();
    } else {
        if (kind != "hardcore") throw std::invalid_argument("configuration: expected a hard-core configuration");
        out.spins.assign(g.vertex_count(), 0);
        for (auto v : j.at("occupied").get<std::vector<Vertex>>()) {
            if (v >= g.vertex_count()) throw std::invalid_argument("configuration: vertex out of range");
            out.spins[v] = 1;
        }
    }
    if (!is_valid(g, out, model)) throw std::invalid_argument("configuration: not valid for this graph and model");
    return out;
}

nlohmann::json to_json(const RunReport& r) {
    return {{"steps", r.steps},
            {"wall_seconds", r.wall_seconds},
            {"frozen_incidents", r.frozen_incidents},
            {"blocks", r.blocks},
            {"shattered_blocks", r.shattered_blocks},
            {"shattered_vertices", r.shattered_vertices}};
}

nlohmann::json to_json(const RunPlan& plan) {
    nlohmann::json j{{"err", plan.err}, {"mix_const", plan.mix_const}, {"steps", plan.steps}};
    if (const auto* c = std::get_if<ColouringModel>(&plan.model)) {
        j["model"] = "colouring";
        j["k"] = c->k;
    } else {
        j["model"] = "hardcore";
        j["lambda"] = std::get<HardcoreModel>(plan.model).lambda;
    }
    return j;
}

}  // namespace glauber
