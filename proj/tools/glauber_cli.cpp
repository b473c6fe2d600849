// Command-line front end: generate, blocks, sample, verify, couple.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "glauber/blocks.hpp"
#include "glauber/coupling_lab.hpp"
#include "glauber/dynamics.hpp"
#include "glauber/exact_gibbs.hpp"
#include "glauber/graph.hpp"
#include "glauber/verify.hpp"
#include "glauber/weighting.hpp"

using namespace glauber;
using nlohmann::json;

namespace {

struct Config {
    std::size_t n = 100;
    double d = 5.0;
    std::vector<int> k;
    std::vector<double> lambda;
    std::optional<double> alpha, gamma;
    double eps = 0.01;
    double cexp = 10.0;
    double err = std::exp(-1.0);
    double mix_const = 50.0;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    std::string in, out;
    std::size_t jobs = 1;
    double threshold = 0.05;
    bool strict = false;
    bool averaged = false;
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Graph load_graph(const Config& c) {
    if (c.in.empty()) return generate_gnp(c.n, c.d, c.seed);
    std::ifstream f(c.in);
    if (!f) throw std::runtime_error("cannot open " + c.in);
    return read_edge_list(f);
}

void emit(const Config& c, const std::string& text) {
    if (c.out.empty() || c.out == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw std::runtime_error("cannot write " + c.out);
    f << text << '\n';
}

bool hardcore(const Config& c) { return !c.lambda.empty(); }

void require_one_model(const Config& c, bool allow_many) {
    if (c.k.empty() == c.lambda.empty()) throw UsageError("give exactly one of --k or --lambda");
    if (!allow_many && (c.k.size() > 1 || c.lambda.size() > 1))
        throw UsageError("this command takes a single --k or --lambda value");
    for (int k : c.k)
        if (k < 2) throw UsageError("--k must be at least 2");
    for (double l : c.lambda)
        if (!(l > 0.0)) throw UsageError("--lambda must be positive");
}

WeightParams weight_params(const Config& c, std::size_t n) {
    // colouring: alpha = gamma = 1e-2; hard-core: alpha = eps/2, gamma = eps^2
    const double a = c.alpha.value_or(hardcore(c) ? c.eps / 2.0 : 0.01);
    const double g = c.gamma.value_or(hardcore(c) ? c.eps * c.eps : 0.01);
    try {
        return WeightParams::derive(a, g, c.cexp, c.d, n);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("weight constants: ") + e.what() + " (need 0 < gamma <= alpha, c > 0, d > 1)");
    }
}

void regime_warnings(const Config& c) {
    for (int k : c.k) {
        const auto need = static_cast<int>(std::ceil(5.5 * c.d));
        if (k < need)
            std::cerr << "warning: k=" << k << " is below ceil(11d/2)=" << need
                      << "; the chain is still exact per step but fast mixing is not guaranteed\n";
    }
    for (double l : c.lambda) {
        const double cap = (1.0 - c.eps) / (2.0 * c.d);
        if (l > cap)
            std::cerr << "warning: lambda=" << l << " exceeds (1-eps)/(2d)=" << cap
                      << "; the chain is still exact per step but fast mixing is not guaranteed\n";
    }
}

Model model_at(const Config& c, std::size_t i) {
    if (hardcore(c)) return HardcoreModel{c.lambda[i]};
    return ColouringModel{c.k[i]};
}

BlockPartition partition_for(const Graph& g, const Config& c, const WeightParams& p) {
    return build_blocks(g, break_points(g, p), p);
}

int cmd_generate(const Config& c) {
    if (c.out.empty()) throw UsageError("generate needs --out");
    const Graph g = generate_gnp(c.n, c.d, c.seed);
    std::ofstream f(c.out);
    if (!f) throw std::runtime_error("cannot write " + c.out);
    write_edge_list(f, g);
    std::cout << json{{"n", g.vertex_count()}, {"edges", g.edge_count()}, {"out", c.out}}.dump() << '\n';
    return 0;
}

int cmd_blocks(const Config& c) {
    const Graph g = load_graph(c);
    const WeightParams p = weight_params(c, g.vertex_count());
    const BreakPointSet bp = break_points(g, p);
    const BlockPartition part = build_blocks(g, bp, p);
    ValidationOptions vo;
    vo.seed = c.seed;
    const ValidationReport rep = validate_conditions(g, part, bp, p, vo);
    json j = to_json(part);
    j["params"] = to_json(p);
    j["break_points"] = bp.ids();
    j["validation"] = to_json(rep);
    emit(c, j.dump(2));
    std::cerr << "blocks: " << part.size() << ", break-points: " << bp.count()
              << ", Other: " << part.count(BlockKind::Other) << ", violations: " << rep.violations.size() << '\n';
    return rep.ok() ? 0 : 1;
}

int cmd_sample(const Config& c) {
    require_one_model(c, false);
    regime_warnings(c);
    const Graph g = load_graph(c);
    const WeightParams p = weight_params(c, g.vertex_count());
    const Model model = model_at(c, 0);
    ChainOptions co;
    co.strict = c.strict;
    const BlockChain chain(g, partition_for(g, c, p), model, co);
    if (chain.shattered_blocks() > 0)
        std::cerr << "note: " << chain.shattered_blocks() << " block(s) with " << chain.shattered_vertices()
                  << " vertices are beyond exact sampling and were split into single vertices\n";
    const RunPlan plan = RunPlan::derive(model, g.vertex_count(), c.err, c.mix_const);
    Rng rng(c.seed);
    RunReport report;
    const Configuration x = run_chain(chain, plan, rng, &report);
    if (!is_valid(g, x, model)) throw std::logic_error("sampled configuration is invalid");
    json rep = to_json(report);
    rep.erase("wall_seconds");  // keeps stdout identical across reruns
    json j{{"configuration", to_json(x, model)}, {"plan", to_json(plan)}, {"report", rep}};
    emit(c, j.dump(2));
    std::cerr << "sampled " << report.steps << " steps in " << report.wall_seconds << " s\n";
    return 0;
}

int cmd_verify(const Config& c) {
    require_one_model(c, false);
    const Graph g = load_graph(c);
    const WeightParams p = weight_params(c, g.vertex_count());
    const Model model = model_at(c, 0);
    const BlockPartition part = partition_for(g, c, p);
    const BlockChain chain(g, part, model);
    const RunPlan plan = RunPlan::derive(model, g.vertex_count(), c.err, c.mix_const);
    const BruteKernel kernel(g, chain.partition(), model);
    const Configuration start = initial_configuration(g, model);
    EmpiricalCounter counter;
    run_replicas(chain, plan, start, c.seed, c.trials, c.jobs,
                 [&](std::size_t, const Configuration& x) { counter.add(encode(x.spins, model)); });
    const DiscreteLaw emp = counter.law();
    const double tv = tv_distance(emp, kernel.stationary());
    const auto balance = kernel.detailed_balance();
    const bool pass = tv <= c.threshold;
    json j{{"n", g.vertex_count()},
           {"edges", g.edge_count()},
           {"states", kernel.states()},
           {"runs", c.trials},
           {"steps", plan.steps},
           {"blocks", chain.block_count()},
           {"tv", tv},
           {"threshold", c.threshold},
           {"noise_floor", tv_noise_floor(kernel.stationary(), c.trials)},
           {"detailed_balance_max_defect", balance.max_defect},
           {"irreducible", kernel.irreducible()},
           {"pass", pass}};
    emit(c, j.dump(2));
    return pass ? 0 : 1;
}

int cmd_couple(const Config& c) {
    require_one_model(c, true);
    regime_warnings(c);
    const Graph g = load_graph(c);
    const WeightParams p = weight_params(c, g.vertex_count());
    const BlockPartition part = partition_for(g, c, p);
    std::ostringstream csv;
    csv << "model,param,n,blocks,trials,estimator,mean_hamming,std_error,ci_high,contraction_times_n\n";
    const std::size_t count = hardcore(c) ? c.lambda.size() : c.k.size();
    json all = json::array();
    for (std::size_t i = 0; i < count; ++i) {
        const Model model = model_at(c, i);
        const BlockChain chain(g, part, model);
        ContractionOptions opts;
        opts.averaged = c.averaged;
        const ContractionReport r = estimate_contraction_parallel(chain, c.trials, c.seed, c.jobs, opts);
        json j = to_json(r);
        j["model"] = hardcore(c) ? "hardcore" : "colouring";
        j["param"] = hardcore(c) ? json(c.lambda[i]) : json(c.k[i]);
        all.push_back(j);
        csv << j["model"].get<std::string>() << ',' << j["param"].dump() << ',' << r.n << ',' << r.blocks << ','
            << r.trials << ',' << (r.averaged ? "averaged" : "literal") << ',' << r.mean_hamming() << ','
            << r.std_error() << ',' << r.mean_hamming() + 3.0 * r.std_error() << ','
            << static_cast<double>(r.n) * (1.0 - r.mean_hamming()) << '\n';
    }
    if (!c.out.empty()) {
        std::ofstream f(c.out);
        if (!f) throw std::runtime_error("cannot write " + c.out);
        f << csv.str();
    }
    std::cout << all.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block Glauber dynamics for colourings and the hard-core model on sparse random graphs"};
    app.require_subcommand(1);
    Config c;

    auto common = [&](CLI::App* sub, bool model_flags) {
        sub->add_option("--n", c.n, "vertices when generating G(n, d/n)");
        sub->add_option("--d", c.d, "expected degree");
        sub->add_option("--seed", c.seed, "random seed");
        sub->add_option("--in", c.in, "edge-list file (otherwise G(n, d/n) is generated)");
        sub->add_option("--out", c.out, "output file (default stdout)");
        sub->add_option("--alpha", c.alpha, "light/heavy slack (default 0.01, or eps/2 for hard-core)");
        sub->add_option("--gamma", c.gamma, "light decay (default 0.01, or eps^2 for hard-core)");
        sub->add_option("--cexp", c.cexp, "heavy weight exponent");
        if (model_flags) {
            sub->add_option("--k", c.k, "number of colours");
            sub->add_option("--lambda", c.lambda, "hard-core fugacity");
            sub->add_option("--eps", c.eps, "hard-core slack epsilon");
            sub->add_option("--err", c.err, "target total variation error");
            sub->add_option("--mix-const", c.mix_const, "multiplier C in T = ln(1/err) C n ln n");
            sub->add_option("--jobs", c.jobs, "concurrent replicas");
            sub->add_flag("--strict", c.strict, "fail instead of splitting blocks beyond exact sampling");
        }
    };

    auto* gen = app.add_subcommand("generate", "write an edge list of G(n, d/n)");
    gen->add_option("--n", c.n, "vertices");
    gen->add_option("--d", c.d, "expected degree");
    gen->add_option("--seed", c.seed, "random seed");
    gen->add_option("--out", c.out, "output edge-list file")->required();

    auto* blk = app.add_subcommand("blocks", "break-points, block partition and validation as JSON");
    common(blk, false);
    auto* smp = app.add_subcommand("sample", "run the chain and print the final configuration");
    common(smp, true);
    auto* ver = app.add_subcommand("verify", "compare the chain's output law with exact enumeration");
    common(ver, true);
    ver->add_option("--trials", c.trials, "independent runs");
    ver->add_option("--threshold", c.threshold, "TV threshold for passing");
    auto* cpl = app.add_subcommand("couple", "contraction estimates over a k or lambda grid (CSV with --out)");
    common(cpl, true);
    cpl->add_option("--trials", c.trials, "coupled transitions per grid point");
    cpl->add_flag("--averaged", c.averaged, "average each trial over the block choice");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;  // help and version exit 0
    }
    try {
        if (c.n == 0) throw UsageError("--n must be positive");
        if (!(c.d >= 0.0)) throw UsageError("--d must be nonnegative");
        if (!(c.err > 0.0 && c.err < 1.0)) throw UsageError("--err must lie in (0, 1)");
        if (!(c.mix_const > 0.0)) throw UsageError("--mix-const must be positive");
        if (!(c.eps > 0.0 && c.eps < 1.0)) throw UsageError("--eps must lie in (0, 1)");
        if (c.jobs == 0) throw UsageError("--jobs must be at least 1");
        if (*gen) return cmd_generate(c);
        if (*blk) return cmd_blocks(c);
        if (*smp) return cmd_sample(c);
        if (*ver) return cmd_verify(c);
        if (*cpl) return cmd_couple(c);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
