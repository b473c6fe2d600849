#include "glauber/coupling_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace glauber {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Spin draw_index(std::span<const double> w, Rng& rng) {
    double total = 0.0;
    for (double x : w) total += x;
    double target = uniform01(rng) * total;
    std::size_t last = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] <= 0.0) continue;
        last = i;
        if (target < w[i]) return static_cast<Spin>(i);
        target -= w[i];
    }
    return static_cast<Spin>(last);
}

std::vector<Spin> alternatives(const Graph& g, std::span<const Spin> spins, const Model& model, Vertex v) {
    std::vector<Spin> out;
    if (const auto* c = std::get_if<ColouringModel>(&model)) {
        std::vector<std::uint8_t> used(static_cast<std::size_t>(c->k), 0);
        for (Vertex u : g.neighbours(v))
            if (spins[u] >= 0 && spins[u] < c->k) used[static_cast<std::size_t>(spins[u])] = 1;
        for (Spin s = 0; s < c->k; ++s)
            if (s != spins[v] && !used[static_cast<std::size_t>(s)]) out.push_back(s);
        return out;
    }
    if (spins[v] == 1) return {0};
    for (Vertex u : g.neighbours(v))
        if (spins[u] == 1) return {};
    return {1};
}

void burn(const BlockChain& chain, std::span<Spin> x, std::uint64_t steps, Rng& rng) {
    for (std::uint64_t t = 0; t < steps; ++t)
        chain.update_block(static_cast<std::size_t>(uniform_index(rng, chain.block_count())), x, rng);
}

std::uint64_t default_burn_in(std::size_t n) {
    if (n < 2) return 0;
    const double nn = static_cast<double>(n);
    return static_cast<std::uint64_t>(std::ceil(10.0 * nn * std::log(nn)));
}

}  // namespace

double rho_colour(std::size_t degree, int k, double d, double alpha) {
    const double threshold = (1.0 + alpha) * d;
    if (static_cast<double>(degree) > threshold) return 1.0;
    if (static_cast<double>(k) <= threshold)
        throw std::invalid_argument("rho_colour: k must exceed (1+alpha)d for a light vertex");
    return std::min(1.0, 2.0 / (static_cast<double>(k) - threshold));
}

double rho_hardcore(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("rho_hardcore: lambda must be positive");
    return lambda / (1.0 + lambda);
}

double DisagreementParams::rho(std::size_t degree) const {
    if (const auto* c = std::get_if<ColouringModel>(&model)) return rho_colour(degree, c->k, d, alpha);
    return rho_hardcore(std::get<HardcoreModel>(model).lambda);
}

double overlap(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("overlap: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::min(p[i], q[i]);
    return s;
}

std::pair<Spin, Spin> maximal_coupling(std::span<const double> p, std::span<const double> q, Rng& rng) {
    if (p.size() != q.size()) throw std::invalid_argument("maximal_coupling: size mismatch");
    if (std::equal(p.begin(), p.end(), q.begin())) {
        const Spin s = draw_index(p, rng);
        return {s, s};
    }
    const std::size_t m = p.size();
    std::vector<double> common(m), rp(m), rq(m);
    double ov = 0.0, sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        common[i] = std::min(p[i], q[i]);
        rp[i] = p[i] - common[i];
        rq[i] = q[i] - common[i];
        ov += common[i];
        sp += rp[i];
        sq += rq[i];
    }
    if (uniform01(rng) < ov / (ov + std::max(sp, sq)) || sp <= 0.0 || sq <= 0.0) {
        const Spin s = draw_index(common, rng);
        return {s, s};
    }
    return {draw_index(rp, rng), draw_index(rq, rng)};
}

std::vector<double> vertex_law(const Graph& g, Vertex v, std::span<const Spin> spins, const Model& model) {
    if (const auto* c = std::get_if<ColouringModel>(&model)) {
        std::vector<double> law(static_cast<std::size_t>(c->k), 1.0);
        for (Vertex u : g.neighbours(v))
            if (spins[u] >= 0 && spins[u] < c->k) law[static_cast<std::size_t>(spins[u])] = 0.0;
        double total = 0.0;
        for (double x : law) total += x;
        if (total <= 0.0) throw FrozenBlockError("vertex " + std::to_string(v) + " has no available colour");
        for (double& x : law) x /= total;
        return law;
    }
    for (Vertex u : g.neighbours(v))
        if (spins[u] == 1) return {1.0, 0.0};
    const double lambda = std::get<HardcoreModel>(model).lambda;
    return {1.0 / (1.0 + lambda), lambda / (1.0 + lambda)};
}

// ---------------------------------------------------------------------------

Coupler::Coupler(const BlockChain& chain) : chain_(&chain) {}

std::size_t Coupler::update(std::size_t b, std::span<Spin> x, std::span<Spin> y, Rng& rng) const {
    const Graph& g = chain_->graph();
    const BlockPartition& part = chain_->partition();
    const Model& model = chain_->model();
    const auto& block = part.blocks[b];
    if (block.size() == 1) {
        const Vertex v = block.front();
        const auto px = vertex_law(g, v, x, model);
        const auto py = vertex_law(g, v, y, model);
        const auto [sx, sy] = maximal_coupling(px, py, rng);
        x[v] = sx;
        y[v] = sy;
        return sx != sy ? 1 : 0;
    }

    const BlockSampler& sampler = chain_->sampler(b);
    const std::size_t m = sampler.size();
    const auto order = sampler.order();
    cx_.assign(m, kUnassigned);
    cy_.assign(m, kUnassigned);
    done_.assign(m, 0);

    auto near_disagreement = [&](std::size_t l) {
        for (Vertex z : g.neighbours(order[l])) {
            if (part.block_of[z] == b) {
                const std::size_t lz = sampler.local_index(z);
                if (done_[lz] && cx_[lz] != cy_[lz]) return true;
            } else if (x[z] != y[z]) {
                return true;
            }
        }
        return false;
    };

    for (std::size_t drawn = 0; drawn < m; ++drawn) {
        std::size_t next = SIZE_MAX;
        for (std::size_t l = 0; l < m && next == SIZE_MAX; ++l)
            if (!done_[l] && near_disagreement(l)) next = l;
        if (next == SIZE_MAX) {
            // Nothing left to draw sees a disagreement: both sides share laws.
            for (std::size_t l = 0; l < m; ++l) {
                if (done_[l]) continue;
                const auto law = sampler.marginal(x, model, cx_, l);
                const Spin s = draw_index(law, rng);
                cx_[l] = cy_[l] = s;
                done_[l] = 1;
            }
            break;
        }
        const auto px = sampler.marginal(x, model, cx_, next);
        const auto py = sampler.marginal(y, model, cy_, next);
        const auto [sx, sy] = maximal_coupling(px, py, rng);
        cx_[next] = sx;
        cy_[next] = sy;
        done_[next] = 1;
    }
    std::size_t disagreements = 0;
    for (std::size_t l = 0; l < m; ++l) {
        x[order[l]] = cx_[l];
        y[order[l]] = cy_[l];
        if (cx_[l] != cy_[l]) ++disagreements;
    }
    return disagreements;
}

std::size_t Coupler::step(std::span<Spin> x, std::span<Spin> y, Rng& rng) const {
    const auto b = static_cast<std::size_t>(uniform_index(rng, chain_->block_count()));
    update(b, x, y, rng);
    return b;
}

std::size_t coupled_step(const BlockChain& chain, std::span<Spin> x, std::span<Spin> y, Rng& rng) {
    return Coupler(chain).step(x, y, rng);
}

// ---------------------------------------------------------------------------

PositionCase position_case(const BlockChain& chain, Vertex w) {
    const auto& part = chain.partition();
    const std::uint32_t bw = part.block_of[w];
    const auto nb = chain.graph().neighbours(w);
    const bool outside = std::any_of(nb.begin(), nb.end(), [&](Vertex u) { return part.block_of[u] != bw; });
    if (!outside) return PositionCase::Case1;
    return part.blocks[bw].size() > 1 ? PositionCase::Case2 : PositionCase::Case3;
}

std::optional<std::pair<Vertex, Spin>> perturbation(const Graph& g, std::span<const Spin> spins, const Model& model,
                                                    Rng& rng, std::size_t attempts) {
    if (g.vertex_count() == 0) return std::nullopt;
    for (std::size_t a = 0; a < attempts; ++a) {
        const auto w = static_cast<Vertex>(uniform_index(rng, g.vertex_count()));
        const auto alt = alternatives(g, spins, model, w);
        if (alt.empty()) continue;
        return std::make_pair(w, alt[static_cast<std::size_t>(uniform_index(rng, alt.size()))]);
    }
    return std::nullopt;
}

double ContractionReport::std_error() const {
    if (trials < 2) return 0.0;
    const double t = static_cast<double>(trials);
    const double mean = sum_h / t;
    const double var = std::max(0.0, (sum_h2 - t * mean * mean) / (t - 1.0));
    return std::sqrt(var / t);
}

void ContractionReport::merge(const ContractionReport& o) {
    trials += o.trials;
    sum_h += o.sum_h;
    sum_h2 += o.sum_h2;
    for (std::size_t i = 0; i < 3; ++i) {
        case_trials[i] += o.case_trials[i];
        case_sum_h[i] += o.case_sum_h[i];
    }
    rb_samples += o.rb_samples;
    rb_sum += o.rb_sum;
}

ContractionReport estimate_contraction(const BlockChain& chain, std::uint64_t trials, Rng& rng,
                                       const ContractionOptions& opts) {
    if (trials < 1) throw std::invalid_argument("estimate_contraction: trials must be at least 1");
    const Graph& g = chain.graph();
    const BlockPartition& part = chain.partition();
    const Model& model = chain.model();
    const std::size_t N = chain.block_count();
    const Coupler coupler(chain);

    std::vector<Spin> x = initial_configuration(g, model).spins;
    burn(chain, x, opts.burn_in.value_or(default_burn_in(g.vertex_count())), rng);
    std::vector<Spin> y = x;
    std::vector<Spin> saved;

    ContractionReport rep;
    rep.n = g.vertex_count();
    rep.blocks = N;
    rep.averaged = opts.averaged;
    std::vector<std::size_t> relevant;

    for (std::uint64_t t = 0; t < trials; ++t) {
        burn(chain, x, opts.thin, rng);
        std::copy(x.begin(), x.end(), y.begin());
        const auto pert = perturbation(g, x, model, rng);
        if (!pert) throw std::runtime_error("estimate_contraction: no vertex admits another legal spin");
        const auto [w, alt] = *pert;
        y[w] = alt;
        const std::size_t bw = part.block_of[w];
        const PositionCase pc = position_case(chain, w);

        relevant.assign(1, bw);
        for (Vertex u : g.neighbours(w))
            if (std::find(relevant.begin(), relevant.end(), part.block_of[u]) == relevant.end())
                relevant.push_back(part.block_of[u]);

        auto tally_rb = [&](std::size_t b, std::size_t hb) {
            if (pc == PositionCase::Case3 && b != bw && part.blocks[b].size() > 1) {
                ++rep.rb_samples;
                rep.rb_sum += static_cast<double>(hb);
            }
        };

        double h = 1.0;
        if (!opts.averaged) {
            const auto b = static_cast<std::size_t>(uniform_index(rng, N));
            if (std::find(relevant.begin(), relevant.end(), b) != relevant.end()) {
                const std::size_t hb = coupler.update(b, x, y, rng);
                h = static_cast<double>(hb) + (b != bw ? 1.0 : 0.0);
                tally_rb(b, hb);
            } else {
                chain.update_block(b, x, rng);
            }
            for (Vertex v : part.blocks[b]) y[v] = x[v];
        } else {
            for (std::size_t b : relevant) {
                const auto& block = part.blocks[b];
                saved.resize(block.size());
                for (std::size_t i = 0; i < block.size(); ++i) saved[i] = x[block[i]];
                const std::size_t hb = coupler.update(b, x, y, rng);
                tally_rb(b, hb);
                h += (static_cast<double>(hb) + (b != bw ? 1.0 : 0.0) - 1.0) / static_cast<double>(N);
                for (std::size_t i = 0; i < block.size(); ++i) x[block[i]] = y[block[i]] = saved[i];
                y[w] = alt;
            }
            const auto b = static_cast<std::size_t>(uniform_index(rng, N));
            chain.update_block(b, x, rng);
            for (Vertex v : part.blocks[b]) y[v] = x[v];
        }
        y[w] = x[w];

        rep.trials += 1;
        rep.sum_h += h;
        rep.sum_h2 += h * h;
        rep.case_trials[static_cast<std::size_t>(pc)] += 1;
        rep.case_sum_h[static_cast<std::size_t>(pc)] += h;
    }
    return rep;
}

ContractionReport estimate_contraction_parallel(const BlockChain& chain, std::uint64_t trials, std::uint64_t seed,
                                                std::size_t jobs, const ContractionOptions& opts) {
    jobs = std::max<std::size_t>(1, std::min<std::uint64_t>(jobs, trials));
    std::vector<ContractionReport> parts(jobs);
    auto worker = [&](std::size_t j) {
        const BlockChain local = chain;
        Rng rng = replica_rng(seed, j);
        const std::uint64_t share = trials / jobs + (j < trials % jobs ? 1 : 0);
        parts[j] = estimate_contraction(local, share, rng, opts);
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker, j);
        for (auto& t : threads) t.join();
    }
    ContractionReport out = parts[0];
    for (std::size_t j = 1; j < jobs; ++j) out.merge(parts[j]);
    return out;
}

double RateEstimate::std_error() const {
    if (samples < 2) return 0.0;
    const double t = static_cast<double>(samples);
    const double m = sum / t;
    return std::sqrt(std::max(0.0, (sum2 - t * m * m) / (t - 1.0)) / t);
}

RateEstimate single_vertex_disagreement(const BlockChain& chain, std::uint64_t samples, Rng& rng,
                                        const std::function<bool(Vertex)>& accept, std::uint64_t burn_in,
                                        std::uint64_t thin) {
    const Graph& g = chain.graph();
    const BlockPartition& part = chain.partition();
    const Model& model = chain.model();
    std::vector<Spin> x = initial_configuration(g, model).spins;
    burn(chain, x, burn_in, rng);
    std::vector<Spin> y = x;
    RateEstimate est;
    std::vector<Vertex> candidates;
    std::uint64_t misses = 0;
    while (est.samples < samples) {
        burn(chain, x, thin, rng);
        std::copy(x.begin(), x.end(), y.begin());
        const auto pert = perturbation(g, x, model, rng);
        if (!pert) throw std::runtime_error("single_vertex_disagreement: no vertex admits another legal spin");
        const auto [w, alt] = *pert;
        candidates.clear();
        for (Vertex u : g.neighbours(w))
            if (part.blocks[part.block_of[u]].size() == 1 && (!accept || accept(u))) candidates.push_back(u);
        if (candidates.empty()) {
            if (++misses > 1000 * (samples + 1))
                throw std::runtime_error("single_vertex_disagreement: no eligible neighbours found");
            continue;
        }
        y[w] = alt;
        const Vertex u = candidates[static_cast<std::size_t>(uniform_index(rng, candidates.size()))];
        const auto px = vertex_law(g, u, x, model);
        const auto py = vertex_law(g, u, y, model);
        const auto [sx, sy] = maximal_coupling(px, py, rng);
        x[u] = sx;
        y[u] = sx;
        y[w] = x[w];
        const double hit = sx != sy ? 1.0 : 0.0;
        ++est.samples;
        est.sum += hit;
        est.sum2 += hit;
    }
    return est;
}

RateEstimate block_disagreement(const BlockChain& chain, std::size_t b, Vertex w, std::uint64_t samples, Rng& rng,
                                std::uint64_t burn_in, std::uint64_t thin) {
    const Graph& g = chain.graph();
    const BlockPartition& part = chain.partition();
    const Model& model = chain.model();
    if (part.block_of[w] == b) throw std::invalid_argument("block_disagreement: w lies inside the block");
    const Coupler coupler(chain);
    std::vector<Spin> x = initial_configuration(g, model).spins;
    burn(chain, x, burn_in, rng);
    std::vector<Spin> y = x;
    RateEstimate est;
    std::uint64_t misses = 0;
    while (est.samples < samples) {
        burn(chain, x, thin, rng);
        std::copy(x.begin(), x.end(), y.begin());
        const auto alt = alternatives(g, x, model, w);
        if (alt.empty()) {
            if (++misses > 1000 * (samples + 1))
                throw std::runtime_error("block_disagreement: w never admits another legal spin");
            continue;
        }
        y[w] = alt[static_cast<std::size_t>(uniform_index(rng, alt.size()))];
        const auto hb = static_cast<double>(coupler.update(b, x, y, rng));
        for (Vertex v : part.blocks[b]) y[v] = x[v];
        y[w] = x[w];
        ++est.samples;
        est.sum += hb;
        est.sum2 += hb * hb;
    }
    return est;
}

// ---------------------------------------------------------------------------

std::size_t SawTree::depth() const {
    std::uint32_t d = 0;
    for (auto l : level) d = std::max(d, l);
    return d;
}

std::vector<std::size_t> SawTree::level_counts() const {
    std::vector<std::size_t> out(vertex.empty() ? 0 : depth() + 1, 0);
    for (auto l : level) ++out[l];
    return out;
}

SawTree saw_tree(const Graph& g, std::span<const Vertex> block, Vertex root, std::size_t max_nodes) {
    std::vector<Vertex> sorted(block.begin(), block.end());
    std::sort(sorted.begin(), sorted.end());
    if (!std::binary_search(sorted.begin(), sorted.end(), root)) throw std::invalid_argument("saw_tree: root not in block");
    auto inside = [&](Vertex v) { return std::binary_search(sorted.begin(), sorted.end(), v); };

    SawTree t;
    std::vector<Vertex> on_path;
    struct Frame {
        std::size_t node;
        std::size_t next;  // index into neighbours
    };
    t.vertex.push_back(root);
    t.parent.push_back(-1);
    t.level.push_back(0);
    on_path.push_back(root);
    std::vector<Frame> stack{{0, 0}};
    while (!stack.empty()) {
        Frame& f = stack.back();
        const Vertex v = t.vertex[f.node];
        const auto nb = g.neighbours(v);
        if (f.next == nb.size()) {
            stack.pop_back();
            on_path.pop_back();
            continue;
        }
        const Vertex u = nb[f.next++];
        if (!inside(u) || std::find(on_path.begin(), on_path.end(), u) != on_path.end()) continue;
        if (t.size() >= max_nodes) throw std::length_error("saw_tree: node limit exceeded");
        const std::size_t node = t.size();
        t.vertex.push_back(u);
        t.parent.push_back(static_cast<std::int32_t>(f.node));
        t.level.push_back(t.level[f.node] + 1);
        on_path.push_back(u);
        stack.push_back({node, 0});
    }
    return t;
}

DisagreementExpectation disagreement_expectation(const SawTree& tree, const std::function<double(Vertex)>& rho) {
    DisagreementExpectation out;
    if (tree.size() == 0) return out;
    out.per_level.assign(tree.depth() + 1, 0.0);
    std::vector<double> prod(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const double r = rho(tree.vertex[i]);
        prod[i] = tree.parent[i] < 0 ? r : r * prod[static_cast<std::size_t>(tree.parent[i])];
        out.per_level[tree.level[i]] += prod[i];
    }
    for (double x : out.per_level) out.total += x;
    return out;
}

DisagreementExpectation disagreement_expectation(const Graph& g, const SawTree& tree,
                                                 const DisagreementParams& params) {
    return disagreement_expectation(tree, [&](Vertex v) { return params.rho(g.degree(v)); });
}

GrowthTree growth_tree(const Graph& g, const SawTree& tree) {
    GrowthTree out;
    out.parent = tree.parent;
    for (Vertex v : tree.vertex) out.delta.push_back(static_cast<double>(g.degree(v)));
    return out;
}

double growth_theta(double p, double s, double zeta) {
    const double ps = p * s;
    return std::min(1.0 - ps * (1.0 + zeta), 1.0 - std::pow(ps, 0.9));
}

GrowthVerdict check_growth_bound(const GrowthTree& tree, const GrowthParams& prm, GrowthWeight weight) {
    constexpr double kSlack = 1e-12;
    const std::size_t n = tree.size();
    if (tree.delta.size() != n) throw std::invalid_argument("check_growth_bound: delta size mismatch");
    if (!(prm.p >= 0.0 && prm.p <= 1.0)) throw std::invalid_argument("check_growth_bound: p must lie in [0, 1]");
    GrowthVerdict out;
    const double log_p = std::log(prm.p);
    const double log_cap = std::log1p(prm.zeta);
    std::vector<std::uint32_t> level(n, 0);
    std::vector<double> log_c(n, 0.0), log_h(n, 0.0);
    std::uint32_t depth = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t par = tree.parent[i];
        if (par >= static_cast<std::int32_t>(i)) throw std::invalid_argument("check_growth_bound: parents must precede children");
        const auto pi = static_cast<std::size_t>(par);
        level[i] = par < 0 ? 0 : level[pi] + 1;
        depth = std::max(depth, level[i]);
        const bool heavy = weight == GrowthWeight::Colouring && tree.delta[i] > prm.s;
        log_c[i] = (heavy ? 0.0 : log_p) + (par < 0 ? 0.0 : log_c[pi]);
        log_h[i] = (heavy ? 10.0 * std::log(prm.delta) + std::log(tree.delta[i]) : -log_cap) + (par < 0 ? 0.0 : log_h[pi]);
        if (heavy && log_h[i] > log_cap + kSlack && out.hypothesis_holds) {
            out.hypothesis_holds = false;
            out.first_violation = GrowthViolation{GrowthViolation::Kind::Hypothesis, i, log_h[i], log_cap};
        }
    }
    if (n == 0) return out;
    std::vector<double> hi(depth + 1, kNegInf);
    for (std::size_t i = 0; i < n; ++i) hi[level[i]] = std::max(hi[level[i]], log_c[i]);
    std::vector<double> acc(depth + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (hi[level[i]] > kNegInf) acc[level[i]] += std::exp(log_c[i] - hi[level[i]]);
    out.log_level_sums.resize(depth + 1);
    const double shrink = 1.0 - prm.theta;
    for (std::uint32_t l = 0; l <= depth; ++l) {
        const double lhs = hi[l] == kNegInf ? kNegInf : hi[l] + std::log(acc[l]);
        out.log_level_sums[l] = lhs;
        double rhs;
        if (l == 0) {
            rhs = log_p;
        } else {
            rhs = shrink > 0.0 ? log_p + static_cast<double>(l) * std::log(shrink) : kNegInf;
        }
        if (lhs > rhs + kSlack && out.conclusion_holds) {
            out.conclusion_holds = false;
            if (!out.first_violation) out.first_violation = GrowthViolation{GrowthViolation::Kind::Conclusion, l, lhs, rhs};
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const ContractionReport& r) {
    const double n = static_cast<double>(r.n);
    nlohmann::json cases = nlohmann::json::array();
    for (std::size_t i = 0; i < 3; ++i) {
        cases.push_back({{"case", i + 1},
                         {"trials", r.case_trials[i]},
                         {"mean_hamming", r.case_trials[i] ? r.case_sum_h[i] / static_cast<double>(r.case_trials[i]) : 0.0}});
    }
    const double se = r.std_error();
    return {{"trials", r.trials},
            {"n", r.n},
            {"blocks", r.blocks},
            {"estimator", r.averaged ? "averaged" : "literal"},
            {"mean_hamming", r.mean_hamming()},
            {"std_error", se},
            {"ci_low", r.mean_hamming() - 3.0 * se},
            {"ci_high", r.mean_hamming() + 3.0 * se},
            {"contraction_times_n", n * (1.0 - r.mean_hamming())},
            {"cases", cases},
            {"rb_samples", r.rb_samples},
            {"mean_rb", r.mean_rb()}};
}

nlohmann::json to_json(const DisagreementExpectation& e) { return {{"per_level", e.per_level}, {"total", e.total}}; }

nlohmann::json to_json(const GrowthVerdict& v) {
    nlohmann::json j{{"hypothesis_holds", v.hypothesis_holds},
                     {"conclusion_holds", v.conclusion_holds},
                     {"log_level_sums", v.log_level_sums}};
    if (v.first_violation) {
        const auto& f = *v.first_violation;
        j["first_violation"] = {{"kind", f.kind == GrowthViolation::Kind::Hypothesis ? "hypothesis" : "conclusion"},
                                {"index", f.index},
                                {"log_lhs", f.log_lhs},
                                {"log_rhs", f.log_rhs}};
    } else {
        j["first_violation"] = nullptr;
    }
    return j;
}

}  // namespace glauber
