#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lktsp/bench.hpp"
#include "lktsp/candidates.hpp"
#include "lktsp/exact.hpp"
#include "lktsp/instance.hpp"
#include "lktsp/kernels.hpp"
#include "lktsp/popmusic.hpp"
#include "lktsp/solver.hpp"

using namespace lktsp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNoSolution = 3;

Metric metric_from_flag(const std::string& m) {
    if (m == "euc2d") return Metric::EUC_2D_ROUNDED;
    if (m == "ceil2d") return Metric::CEIL_2D;
    if (m == "exact") return Metric::EUC_2D_EXACT;
    throw std::invalid_argument("unknown metric: " + m);
}

struct SolveArgs {
    std::string instance;
    std::string strategy = "ALPHA_FIXED";
    std::string kick = "DOUBLE_BRIDGE";
    int fold = 1;
    double budget = 0.0;
    std::optional<double> target;
    std::string opt_tour;
    std::string initial_tour;
    int k = 5;
    bool no_subgradient = false;
    int m = 100;
    PopmusicParams pop;
    int trials = 0;
    int runs = 1;
    int breadth = 5;
    bool include_candidate_time = false;
};

int run_solve(const SolveArgs& a) {
    Instance inst = parse_tsplib_file(a.instance);

    SolverConfig cfg;
    cfg.strategy = strategy_from_name(a.strategy);
    cfg.kick = kick_from_name(a.kick);
    cfg.alpha_k = a.k;
    cfg.alpha_use_subgradient = !a.no_subgradient;
    cfg.union_m = a.m;
    cfg.pop = a.pop;
    cfg.trials = a.trials;
    cfg.runs = a.runs;
    cfg.budget_seconds = a.budget;
    cfg.include_candidate_time = a.include_candidate_time;
    cfg.three_opt_breadth = a.breadth;

    std::optional<Tour> optimal;
    if (!a.opt_tour.empty()) {
        optimal = parse_tour_file_path(a.opt_tour, inst);
        cfg.target_length = optimal->length;
    }
    if (a.target) cfg.target_length = a.target;
    if (!a.initial_tour.empty())
        cfg.initial_tour = parse_tour_file_path(a.initial_tour, inst).order;

    RunRecord rec = solve_record(inst, cfg, a.fold, optimal);
    std::cout << run_record_csv_header() << "\n" << run_record_csv_row(rec) << "\n";

    const bool wanted_target = cfg.target_length || inst.optimum_length();
    if (wanted_target && !rec.solved) return kExitNoSolution;
    return kExitOk;
}

struct CandArgs {
    std::string instance;
    std::string generator = "alpha";
    std::string out;
    int fold = 1;
    int k = 5;
    bool no_subgradient = false;
    int m = 100;
    PopmusicParams pop;
};

int run_candidates(const CandArgs& a) {
    Instance inst = parse_tsplib_file(a.instance);
    const std::uint64_t seed = derive_seed(a.fold, 0);
    CandidateSet cand;
    if (a.generator == "nearest")
        cand = nearest_candidates(inst, a.k);
    else if (a.generator == "alpha")
        cand = alpha_candidates(inst, a.k, !a.no_subgradient);
    else if (a.generator == "two-opt-union")
        cand = two_opt_union(inst, a.m, seed);
    else if (a.generator == "popmusic")
        cand = popmusic_candidates(inst, seed, a.pop);
    else
        throw std::invalid_argument("unknown generator: " + a.generator);

    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    out << write_candidate_file(cand, a.generator == "alpha");
    std::cout << "cities: " << cand.n() << "\nunique edges: " << unique_edge_count(cand)
              << "\n";
    return kExitOk;
}

struct AnalyzeArgs {
    std::string instance;
    std::string candidates;
    std::string opt_tour;
};

int run_analyze(const AnalyzeArgs& a) {
    Instance inst = parse_tsplib_file(a.instance);
    std::ifstream in(a.candidates);
    if (!in) throw std::runtime_error("cannot open " + a.candidates);
    CandidateSet cand = parse_candidate_file(in);
    if (cand.n() != inst.n())
        throw std::runtime_error("candidate file does not match the instance size");
    Tour opt = parse_tour_file_path(a.opt_tour, inst);

    const auto miss = missing_optimal_edges(cand, opt);
    std::cout << "cities: " << inst.n() << "\n";
    std::cout << "unique edges: " << unique_edge_count(cand) << "\n";
    std::cout << "optimum length: " << opt.length << "\n";
    std::cout << "missing: " << miss.count << "\n";
    for (const auto& [i, j] : miss.edges)
        std::cout << "missing edge: " << i + 1 << " " << j + 1 << "\n";
    return kExitOk;
}

struct BenchArgs {
    std::string manifest;
    std::string configs;
    std::string out_dir;
    int folds = 1;
    double cutoff = 60.0;
    int workers = 1;
    bool verbose = false;
    std::string scatter_x, scatter_y;
};

int run_bench(const BenchArgs& a) {
    auto entries = parse_manifest(a.manifest);
    auto configs = parse_configs_file(a.configs);
    std::filesystem::create_directories(a.out_dir);

    auto report = run_matrix(entries, configs, a.folds, a.cutoff, a.workers, a.verbose);
    for (const std::string& err : report.load_errors)
        std::cerr << "load error: " << err << "\n";

    const std::filesystem::path dir(a.out_dir);
    write_records_csv((dir / "records.csv").string(), report.records);
    export_summary((dir / "summary.csv").string(), report, a.cutoff);
    export_missing_histogram((dir / "missing_histogram.csv").string(), report);
    if (!a.scatter_x.empty()) {
        export_scatter((dir / "scatter.csv").string(), report, a.scatter_x, a.scatter_y,
                       a.cutoff);
        export_scatter_svg((dir / "scatter.svg").string(), report, a.scatter_x,
                           a.scatter_y, a.cutoff);
    }
    std::cout << "records: " << report.records.size() << "\n";
    return kExitOk;
}

struct ExactArgs {
    std::string instance;
    std::string out;
    std::string method = "dp";
};

int run_exact(const ExactArgs& a) {
    Instance inst = parse_tsplib_file(a.instance);
    ExactResult res = a.method == "brute" ? brute_force(inst) : held_karp_dp(inst);
    const std::string text = write_tour_file(inst, res.tour);
    if (a.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(a.out);
        if (!out) throw std::runtime_error("cannot write " + a.out);
        out << text;
    }
    return kExitOk;
}

struct GenArgs {
    std::string kind = "uniform";
    int n = 0;
    std::uint64_t seed = 1;
    double box = 1000.0;
    int clusters = 0;
    double spread = 40.0;
    std::string metric = "euc2d";
    std::string out;
};

int run_gen(const GenArgs& a) {
    const bool clustered = a.kind == "clustered" || a.clusters > 0;
    Instance raw = clustered
                       ? gen_clustered(a.n, a.clusters > 0 ? a.clusters : 5, a.spread,
                                       a.seed)
                       : gen_random_uniform(a.n, a.seed, a.box);
    std::vector<double> xs(raw.xs(), raw.xs() + raw.n());
    std::vector<double> ys(raw.ys(), raw.ys() + raw.n());
    Instance inst =
        make_instance(raw.name(), metric_from_flag(a.metric), std::move(xs), std::move(ys));

    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    out << write_tsplib(inst);
    std::cout << "wrote " << inst.n() << " cities to " << a.out << "\n";
    return kExitOk;
}

void add_pop_flags(CLI::App* sub, PopmusicParams& pop) {
    sub->add_option("--pop-fraction", pop.sample_fraction, "POPMUSIC sample fraction");
    sub->add_option("--pop-r", pop.r, "POPMUSIC sub-path window");
    sub->add_option("--pop-rounds", pop.rebuild_rounds, "POPMUSIC sliding pass cap");
    sub->add_option("--pop-runs", pop.runs_for_candidates, "POPMUSIC tours per set");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Euclidean TSP local search with swappable candidate sets"};
    app.require_subcommand(1);

    std::string lane;
    app.add_option("--lane", lane, "force a distance kernel lane")
        ->check(CLI::IsMember({"scalar", "avx2"}));

    SolveArgs sa;
    auto* solve_cmd = app.add_subcommand("solve", "run the solver on one instance");
    solve_cmd->add_option("instance", sa.instance, "TSPLIB file")->required();
    solve_cmd->add_option("--strategy", sa.strategy, "candidate strategy")
        ->check(CLI::IsMember({"ALPHA_FIXED", "TWO_OPT_FIXED", "POP_FIXED", "POP_RESTART"}));
    solve_cmd->add_option("--kick", sa.kick, "kick move")
        ->check(CLI::IsMember({"DOUBLE_BRIDGE", "CONSTRAINED_RANDOM"}));
    solve_cmd->add_option("--fold", sa.fold, "seed fold in [1,10]");
    solve_cmd->add_option("--budget", sa.budget, "time budget seconds (0 = unlimited)");
    auto* target_opt = solve_cmd->add_option("--target", sa.target, "target length");
    solve_cmd->add_option("--opt-tour", sa.opt_tour, "optimal tour file")
        ->excludes(target_opt);
    solve_cmd->add_option("--initial-tour", sa.initial_tour, "forced starting tour file");
    solve_cmd->add_option("--k", sa.k, "alpha candidates per city");
    solve_cmd->add_flag("--no-subgradient", sa.no_subgradient, "skip the ascent");
    solve_cmd->add_option("--m", sa.m, "tours in the 2-opt union");
    solve_cmd->add_option("--trials", sa.trials, "kicks per run (0 = n)");
    solve_cmd->add_option("--runs", sa.runs, "restarts + 1");
    solve_cmd->add_option("--breadth", sa.breadth, "3-opt candidate breadth");
    solve_cmd->add_flag("--include-candidate-time", sa.include_candidate_time,
                        "bill candidate construction to the budget");
    add_pop_flags(solve_cmd, sa.pop);

    CandArgs ca;
    auto* cand_cmd = app.add_subcommand("candidates", "write a candidate set file");
    cand_cmd->add_option("instance", ca.instance, "TSPLIB file")->required();
    cand_cmd->add_option("--generator", ca.generator, "generator")
        ->check(CLI::IsMember({"nearest", "alpha", "two-opt-union", "popmusic"}));
    cand_cmd->add_option("--out", ca.out, "output file")->required();
    cand_cmd->add_option("--fold", ca.fold, "seed fold in [1,10]");
    cand_cmd->add_option("--k", ca.k, "neighbors per city (nearest/alpha)");
    cand_cmd->add_flag("--no-subgradient", ca.no_subgradient, "skip the ascent");
    cand_cmd->add_option("--m", ca.m, "tours in the 2-opt union");
    add_pop_flags(cand_cmd, ca.pop);

    AnalyzeArgs aa;
    auto* analyze_cmd = app.add_subcommand("analyze", "missing-edge report for a candidate file");
    analyze_cmd->add_option("--instance", aa.instance, "TSPLIB file")->required();
    analyze_cmd->add_option("--candidates", aa.candidates, "candidate file")->required();
    analyze_cmd->add_option("--opt-tour", aa.opt_tour, "optimal tour file")->required();

    BenchArgs ba;
    auto* bench_cmd = app.add_subcommand("bench", "run an instance x config x fold matrix");
    bench_cmd->add_option("--manifest", ba.manifest, "instance manifest CSV")->required();
    bench_cmd->add_option("--configs", ba.configs, "config JSON array")->required();
    bench_cmd->add_option("--out-dir", ba.out_dir, "output directory")->required();
    bench_cmd->add_option("--folds", ba.folds, "folds per pair");
    bench_cmd->add_option("--cutoff", ba.cutoff, "per-run cutoff seconds");
    bench_cmd->add_option("--workers", ba.workers, "parallel solves");
    bench_cmd->add_flag("--verbose", ba.verbose, "progress to stderr");
    auto* sx = bench_cmd->add_option("--scatter-x", ba.scatter_x, "x-axis config name");
    bench_cmd->add_option("--scatter-y", ba.scatter_y, "y-axis config name")->needs(sx);

    ExactArgs ea;
    auto* exact_cmd = app.add_subcommand("exact", "certified optimum for a small instance");
    exact_cmd->add_option("instance", ea.instance, "TSPLIB file")->required();
    exact_cmd->add_option("--out", ea.out, "tour file (default: stdout)");
    exact_cmd->add_option("--method", ea.method, "dp or brute")
        ->check(CLI::IsMember({"dp", "brute"}));

    GenArgs ga;
    auto* gen_cmd = app.add_subcommand("gen", "generate a TSPLIB instance");
    gen_cmd->add_option("--kind", ga.kind, "point layout")
        ->check(CLI::IsMember({"uniform", "clustered"}));
    gen_cmd->add_option("--n", ga.n, "city count")->required();
    gen_cmd->add_option("--seed", ga.seed, "generator seed");
    gen_cmd->add_option("--box", ga.box, "uniform box side");
    gen_cmd->add_option("--clusters", ga.clusters, "cluster count (implies clustered)");
    gen_cmd->add_option("--spread", ga.spread, "cluster spread");
    gen_cmd->add_option("--metric", ga.metric, "euc2d, ceil2d, or exact")
        ->check(CLI::IsMember({"euc2d", "ceil2d", "exact"}));
    gen_cmd->add_option("--out", ga.out, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!lane.empty()) {
            const Lane want = lane == "avx2" ? Lane::AVX2 : Lane::SCALAR;
            if (!lane_available(want)) throw std::runtime_error("lane not available: " + lane);
            force_lane(want);
        }
        if (*solve_cmd) return run_solve(sa);
        if (*cand_cmd) return run_candidates(ca);
        if (*analyze_cmd) return run_analyze(aa);
        if (*bench_cmd) return run_bench(ba);
        if (*exact_cmd) return run_exact(ea);
        if (*gen_cmd) return run_gen(ga);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}
