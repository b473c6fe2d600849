#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "glauber/coupling_lab.hpp"
#include "glauber/verify.hpp"

using namespace glauber;

namespace {

BlockPartition singletons(const Graph& g) {
    std::vector<std::vector<Vertex>> b;
    for (Vertex v = 0; v < g.vertex_count(); ++v) b.push_back({v});
    return make_partition(g, b);
}

BlockPartition derived(const Graph& g, double d) {
    const WeightParams p = WeightParams::derive(0.01, 0.01, 10.0, d, g.vertex_count());
    return build_blocks(g, break_points(g, p), p);
}

bool within3(double observed, double p, double n) { return std::abs(observed - p) <= 3 * std::sqrt(p * (1 - p) / n) + 1e-12; }

// Literal growth oracle: plain products along root paths.
struct LiteralGrowth {
    bool hypothesis = true;
    std::vector<long double> level_sum;
};

LiteralGrowth literal_growth(const GrowthTree& t, const GrowthParams& prm) {
    LiteralGrowth out;
    const std::size_t n = t.size();
    std::vector<long double> c(n), h(n);
    std::vector<std::size_t> level(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool heavy = t.delta[i] > prm.s;
        const long double own_c = heavy ? 1.0L : static_cast<long double>(prm.p);
        const long double own_h = heavy ? std::pow(static_cast<long double>(prm.delta), 10.0L) * t.delta[i]
                                        : 1.0L / (1.0L + prm.zeta);
        const auto par = t.parent[i];
        level[i] = par < 0 ? 0 : level[static_cast<std::size_t>(par)] + 1;
        c[i] = own_c * (par < 0 ? 1.0L : c[static_cast<std::size_t>(par)]);
        h[i] = own_h * (par < 0 ? 1.0L : h[static_cast<std::size_t>(par)]);
        if (heavy && h[i] > 1.0L + prm.zeta) out.hypothesis = false;
        if (out.level_sum.size() <= level[i]) out.level_sum.resize(level[i] + 1, 0.0L);
        out.level_sum[level[i]] += c[i];
    }
    return out;
}

}  // namespace

TEST_CASE("rho examples") {
    CHECK(rho_colour(8, 55, 10, 0.01) == doctest::Approx(2.0 / 44.9).epsilon(1e-12));
    CHECK(rho_colour(8, 55, 10, 0.01) == doctest::Approx(0.0445434).epsilon(1e-6));
    CHECK(rho_colour(12, 55, 10, 0.01) == 1.0);
    CHECK(rho_colour(10, 55, 10, 0.01) == doctest::Approx(2.0 / 44.9).epsilon(1e-12));
    CHECK_THROWS_AS(rho_colour(3, 10, 10, 0.01), std::invalid_argument);
    CHECK(rho_hardcore(1.0) == 0.5);
    CHECK(rho_hardcore(0.045) == doctest::Approx(0.0430622).epsilon(1e-6));
    const double lambda = 0.99 / 20.0;
    CHECK(rho_hardcore(lambda) == doctest::Approx(0.0471653).epsilon(1e-6));
    CHECK(rho_hardcore(lambda) < 0.99 / 20.0 + 1.0 / 200.0);
    const DisagreementParams dp{ColouringModel{55}, 10.0, 0.01};
    CHECK(dp.rho(12) == 1.0);
    const DisagreementParams hp{HardcoreModel{1.0}, 10.0, 0.01};
    CHECK(hp.rho(40) == 0.5);
}

TEST_CASE("maximal coupling draws") {
    const std::vector<double> p{0.5, 0.3, 0.2, 0.0};
    const std::vector<double> q{0.1, 0.3, 0.2, 0.4};
    CHECK(overlap(p, q) == doctest::Approx(0.6));
    Rng rng(1);
    const int N = 200000;
    int differ = 0;
    std::array<int, 4> cx{}, cy{};
    for (int i = 0; i < N; ++i) {
        const auto [a, b] = maximal_coupling(p, q, rng);
        differ += a != b;
        ++cx[static_cast<std::size_t>(a)];
        ++cy[static_cast<std::size_t>(b)];
    }
    CHECK(within3(differ / double(N), 0.4, N));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(within3(cx[i] / double(N), p[i], N));
        CHECK(within3(cy[i] / double(N), q[i], N));
    }
}

TEST_CASE("single-vertex coupling disagrees with probability (a - o) / a") {
    // v = 0 with neighbours 1, 2; k = 5. X sees {0, 1}, Y sees {0, 2}: lists
    // {2,3,4} and {1,3,4}, a = 3, overlap 2.
    const Graph g = Graph::from_edges(3, std::vector<Edge>{{0, 1}, {0, 2}});
    const BlockChain chain(g, singletons(g), ColouringModel{5});
    const Coupler coupler(chain);
    Rng rng(3);
    const int N = 100000;
    int differ = 0;
    for (int i = 0; i < N; ++i) {
        std::vector<Spin> x{3, 0, 1}, y{3, 0, 2};
        differ += static_cast<int>(coupler.update(0, x, y, rng));
        CHECK(x[0] != 0);
    }
    CHECK(within3(differ / double(N), 1.0 / 3.0, N));
}

TEST_CASE("identical states stay coupled and far blocks keep their distance") {
    const Graph g = generate_gnp(120, 3.0, 5);
    const BlockChain chain(g, derived(g, 3.0), ColouringModel{9});
    const Coupler coupler(chain);
    ChainState s{initial_configuration(g, ColouringModel{9}), 0, Rng(2)};
    for (int i = 0; i < 5000; ++i) chain.step(s);
    std::vector<Spin> x = s.config.spins, y = x;
    Rng rng(8);
    for (int i = 0; i < 3000; ++i) {
        coupler.step(x, y, rng);
        REQUIRE(x == y);
    }
    // perturb w, update a block that neither contains w nor touches it
    const auto pert = perturbation(g, x, ColouringModel{9}, rng);
    REQUIRE(pert);
    const auto [w, alt] = *pert;
    y[w] = alt;
    const auto& part = chain.partition();
    std::size_t far = SIZE_MAX;
    for (std::size_t b = 0; b < part.size() && far == SIZE_MAX; ++b) {
        bool touches = part.block_of[w] == b;
        for (Vertex u : g.neighbours(w)) touches = touches || part.block_of[u] == b;
        if (!touches) far = b;
    }
    REQUIRE(far != SIZE_MAX);
    for (int i = 0; i < 200; ++i) {
        CHECK(coupler.update(far, x, y, rng) == 0);
        std::size_t h = 0;
        for (std::size_t v = 0; v < x.size(); ++v) h += x[v] != y[v];
        CHECK(h == 1);
    }
}

TEST_CASE("each side of the coupling is an exact block update") {
    const Graph g = generate_gnp(8, 2.0, 4);
    for (const Model& m : {Model{ColouringModel{4}}, Model{HardcoreModel{1.0}}}) {
        const BlockChain chain(g, derived(g, 2.0), m);
        const BruteKernel kernel(g, chain.partition(), m);
        const Coupler coupler(chain);
        ChainState s{initial_configuration(g, m), 0, Rng(6)};
        for (int i = 0; i < 100; ++i) chain.step(s);
        std::vector<Spin> x0 = s.config.spins;
        Rng rng(14);
        const auto pert = perturbation(g, x0, m, rng);
        REQUIRE(pert);
        std::vector<Spin> y0 = x0;
        y0[pert->first] = pert->second;
        EmpiricalCounter cx, cy;
        for (int t = 0; t < 100000; ++t) {
            std::vector<Spin> x = x0, y = y0;
            coupler.step(x, y, rng);
            cx.add(encode(x, m));
            cy.add(encode(y, m));
        }
        CHECK(tv_distance(cx.law(), kernel.row_law(encode(x0, m))) <= 0.02);
        CHECK(tv_distance(cy.law(), kernel.row_law(encode(y0, m))) <= 0.02);
    }
}

TEST_CASE("edgeless graph contracts at exactly 1 - 1/N under the averaged estimator") {
    const Graph g = Graph::from_edges(50, std::vector<Edge>{});
    const BlockChain chain(g, singletons(g), ColouringModel{3});
    Rng rng(1);
    ContractionOptions avg;
    avg.averaged = true;
    avg.burn_in = 100;
    const auto r = estimate_contraction(chain, 2000, rng, avg);
    CHECK(r.mean_hamming() == doctest::Approx(1.0 - 1.0 / 50.0).epsilon(1e-14));
    CHECK(r.std_error() == doctest::Approx(0.0));
    CHECK(r.case_trials[0] == r.trials);
    ContractionOptions lit;
    lit.burn_in = 100;
    const auto l = estimate_contraction(chain, 200000, rng, lit);
    CHECK(std::abs(l.mean_hamming() - 0.98) <= 3 * l.std_error());
    CHECK(l.case_trials[0] + l.case_trials[1] + l.case_trials[2] == l.trials);
    CHECK(l.mean_hamming() >= 0.0);
}

TEST_CASE("contraction tallies and parallel merge") {
    const Graph g = generate_gnp(100, 3.0, 2);
    const BlockChain chain(g, derived(g, 3.0), HardcoreModel{0.1});
    const auto r = estimate_contraction_parallel(chain, 3001, 7, 3);
    CHECK(r.trials == 3001);
    CHECK(r.case_trials[0] + r.case_trials[1] + r.case_trials[2] == r.trials);
    const auto again = estimate_contraction_parallel(chain, 3001, 7, 3);
    CHECK(again.sum_h == r.sum_h);
    const auto j = to_json(r);
    CHECK(j["trials"] == 3001);
}

TEST_CASE("single-vertex disagreement stays under the percolation rate") {
    const Graph g = generate_gnp(300, 3.0, 3);
    const double lambda = 0.4;
    const BlockChain chain(g, singletons(g), HardcoreModel{lambda});
    Rng rng(10);
    const RateEstimate e = single_vertex_disagreement(chain, 100000, rng, nullptr, 5000);
    CHECK(e.mean() <= rho_hardcore(lambda) + 3 * e.std_error());
    const BlockChain col(g, singletons(g), ColouringModel{20});
    const RateEstimate c = single_vertex_disagreement(col, 100000, rng, nullptr, 5000);
    CHECK(c.mean() <= 1.0 / (20.0 - g.max_degree()) + 3 * c.std_error());
}

TEST_CASE("self-avoiding walk trees") {
    const Graph path = Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}});
    const std::vector<Vertex> abc{0, 1, 2};
    const SawTree t = saw_tree(path, abc, 0);
    CHECK(t.size() == 3);
    CHECK(t.depth() == 2);
    CHECK(t.vertex == std::vector<Vertex>{0, 1, 2});
    const Graph tri = Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}});
    const SawTree k3 = saw_tree(tri, abc, 1);
    CHECK(k3.size() == 5);
    CHECK(k3.level_counts() == std::vector<std::size_t>{1, 2, 2});
    const SawTree one = saw_tree(tri, std::vector<Vertex>{2}, 2);
    CHECK(one.size() == 1);
    CHECK_THROWS_AS(saw_tree(tri, std::vector<Vertex>{2}, 0), std::invalid_argument);
    // level-i nodes are exactly the i-edge self-avoiding walks
    const Graph g = generate_gnp(9, 4.0, 3);
    std::vector<Vertex> all(9);
    std::iota(all.begin(), all.end(), 0);
    const SawTree big = saw_tree(g, all, 0);
    std::vector<std::size_t> walks(9, 0);
    for_each_self_avoiding_path(g, 0, 8, [&](std::span<const Vertex> p) {
        ++walks[p.size() - 1];
        return true;
    });
    auto counts = big.level_counts();
    counts.resize(9, 0);
    CHECK(counts == walks);
}

TEST_CASE("disagreement expectation") {
    const Graph iso = Graph::from_edges(1, std::vector<Edge>{});
    const SawTree single = saw_tree(iso, std::vector<Vertex>{0}, 0);
    const double p = 0.07;
    const auto e1 = disagreement_expectation(single, [&](Vertex) { return p; });
    CHECK(e1.total == doctest::Approx(p));
    std::vector<Edge> e;
    for (Vertex i = 1; i <= 6; ++i) e.emplace_back(0, i);
    const Graph star = Graph::from_edges(7, e);
    std::vector<Vertex> all(7);
    std::iota(all.begin(), all.end(), 0);
    const auto e2 = disagreement_expectation(saw_tree(star, all, 0), [&](Vertex) { return p; });
    REQUIRE(e2.per_level.size() == 2);
    CHECK(e2.per_level[0] == doctest::Approx(p));
    CHECK(e2.per_level[1] == doctest::Approx(6 * p * p));
    CHECK(e2.total == doctest::Approx(p + 6 * p * p));
}

TEST_CASE("growth checker examples") {
    GrowthParams prm;
    prm.p = 0.02;
    prm.s = 20;
    prm.delta = 20;
    prm.zeta = 0.1;
    prm.theta = 1 - prm.p * prm.s * (1 + prm.zeta);
    GrowthTree star;
    star.parent.push_back(-1);
    star.delta.push_back(prm.s);
    for (int i = 0; i < 20; ++i) {
        star.parent.push_back(0);
        star.delta.push_back(1);
    }
    const auto v = check_growth_bound(star, prm);
    CHECK(v.hypothesis_holds);
    CHECK(v.conclusion_holds);
    CHECK(std::exp(v.log_level_sums[1]) == doctest::Approx(20 * prm.p * prm.p));

    GrowthTree line;
    for (int i = 0; i < 40; ++i) {
        line.parent.push_back(i - 1);
        line.delta.push_back(2);
    }
    const auto lv = check_growth_bound(line, prm);
    CHECK(lv.conclusion_holds);
    CHECK(std::exp(lv.log_level_sums[39]) == doctest::Approx(std::pow(prm.p, 40)).epsilon(1e-9));

    GrowthTree bad = line;
    bad.delta[1] = 500;
    const auto bv = check_growth_bound(bad, prm);
    CHECK_FALSE(bv.hypothesis_holds);
    REQUIRE(bv.first_violation);
    CHECK(bv.first_violation->kind == GrowthViolation::Kind::Hypothesis);
    CHECK(bv.first_violation->index == 1);

    CHECK(growth_theta(0.02, 20, 0.1) == doctest::Approx(std::min(1 - 0.4 * 1.1, 1 - std::pow(0.4, 0.9))));
}

TEST_CASE("growth checker agrees with literal recomputation") {
    Rng rng(2718);
    std::size_t agree_hyp = 0, agree_concl = 0, compared = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        GrowthParams prm;
        prm.zeta = 0.01 + 0.5 * uniform01(rng);
        prm.s = static_cast<double>(5 + uniform_index(rng, 26));
        prm.delta = static_cast<double>(5 + uniform_index(rng, 26));
        const double z1 = 1 + prm.zeta;
        const double hi = std::min(1 / (z1 * prm.s), 1 / (z1 * prm.delta));
        const double lo = std::max(1 / (100 * z1 * prm.s), 1 / (100 * z1 * prm.delta));
        prm.p = lo + (hi - lo) * uniform01(rng);
        prm.theta = growth_theta(prm.p, prm.s, prm.zeta);
        GrowthTree t;
        t.parent.push_back(-1);
        t.delta.push_back(static_cast<double>(1 + uniform_index(rng, 30)));
        std::vector<std::size_t> level{0};
        for (std::size_t i = 0; i < t.size() && t.size() < 3000; ++i) {
            if (level[i] == 8) continue;
            const auto kids = uniform_index(rng, std::min<std::uint64_t>(4, static_cast<std::uint64_t>(t.delta[i])) + 1);
            for (std::uint64_t c = 0; c < kids; ++c) {
                t.parent.push_back(static_cast<std::int32_t>(i));
                t.delta.push_back(static_cast<double>(1 + uniform_index(rng, 30)));
                level.push_back(level[i] + 1);
            }
        }
        const auto v = check_growth_bound(t, prm);
        const auto lit = literal_growth(t, prm);
        agree_hyp += v.hypothesis_holds == lit.hypothesis;
        bool concl = true;
        for (std::size_t l = 0; l < lit.level_sum.size(); ++l) {
            const long double rhs = prm.p * std::pow(1.0L - prm.theta, static_cast<long double>(l));
            if (lit.level_sum[l] > rhs * (1 + 1e-9L)) concl = false;
            CHECK(std::exp(v.log_level_sums[l]) == doctest::Approx(static_cast<double>(lit.level_sum[l])).epsilon(1e-9));
        }
        ++compared;
        agree_concl += v.conclusion_holds == concl;
    }
    CHECK(agree_hyp == compared);
    CHECK(agree_concl == compared);
}

TEST_CASE("block disagreement on a tree block is dominated by the walk sum") {
    const Graph g = generate_gnp(300, 3.0, 11);
    // a path block inside the graph: take a BFS path of 4 vertices
    std::vector<Vertex> block;
    for (Vertex s = 0; s < 300 && block.size() < 4; ++s) {
        block.assign(1, s);
        while (block.size() < 4) {
            Vertex next = UINT32_MAX;
            for (Vertex u : g.neighbours(block.back())) {
                bool ok = std::find(block.begin(), block.end(), u) == block.end();
                for (Vertex z : g.neighbours(u))
                    if (z != block.back() && std::find(block.begin(), block.end(), z) != block.end()) ok = false;
                if (ok) next = u;
            }
            if (next == UINT32_MAX) break;
            block.push_back(next);
        }
    }
    REQUIRE(block.size() == 4);
    std::sort(block.begin(), block.end());
    std::vector<std::vector<Vertex>> blocks{block};
    for (Vertex v = 0; v < 300; ++v)
        if (!std::binary_search(block.begin(), block.end(), v)) blocks.push_back({v});
    const BlockChain chain(g, make_partition(g, blocks), ColouringModel{12});
    const std::size_t b = chain.partition().block_of[block[0]];
    Vertex w = UINT32_MAX, v0 = 0;
    for (Vertex v : block)
        for (Vertex u : g.neighbours(v)) {
            if (std::binary_search(block.begin(), block.end(), u)) continue;
            std::size_t into = 0;
            for (Vertex z : g.neighbours(u)) into += std::binary_search(block.begin(), block.end(), z);
            if (into == 1 && w == UINT32_MAX) {
                w = u;
                v0 = v;
            }
        }
    REQUIRE(w != UINT32_MAX);
    const DisagreementParams dp{ColouringModel{12}, 3.0, 0.01};
    const double total = disagreement_expectation(g, saw_tree(g, block, v0), dp).total;
    Rng rng(4);
    const RateEstimate est = block_disagreement(chain, b, w, 20000, rng, 3000, 20);
    CHECK(total >= est.mean() - 3 * est.std_error());
    CHECK(est.mean() > 0.0);
}
