#include "lktsp/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace lktsp {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::ALPHA_FIXED: return "ALPHA_FIXED";
        case Strategy::TWO_OPT_FIXED: return "TWO_OPT_FIXED";
        case Strategy::POP_FIXED: return "POP_FIXED";
        case Strategy::POP_RESTART: return "POP_RESTART";
    }
    return "?";
}

Strategy strategy_from_name(const std::string& s) {
    if (s == "ALPHA_FIXED") return Strategy::ALPHA_FIXED;
    if (s == "TWO_OPT_FIXED") return Strategy::TWO_OPT_FIXED;
    if (s == "POP_FIXED") return Strategy::POP_FIXED;
    if (s == "POP_RESTART") return Strategy::POP_RESTART;
    throw std::invalid_argument("unknown strategy: " + s);
}

const char* kick_name(KickKind k) {
    switch (k) {
        case KickKind::DOUBLE_BRIDGE: return "DOUBLE_BRIDGE";
        case KickKind::CONSTRAINED_RANDOM: return "CONSTRAINED_RANDOM";
    }
    return "?";
}

KickKind kick_from_name(const std::string& s) {
    if (s == "DOUBLE_BRIDGE") return KickKind::DOUBLE_BRIDGE;
    if (s == "CONSTRAINED_RANDOM") return KickKind::CONSTRAINED_RANDOM;
    throw std::invalid_argument("unknown kick: " + s);
}

std::uint64_t derive_seed(int fold, int restart) {
    if (fold < 1 || fold > 10) throw std::invalid_argument("fold must be in [1, 10]");
    if (restart < 0) throw std::invalid_argument("restart must be non-negative");
    return 1000000ull * static_cast<std::uint64_t>(fold) +
           static_cast<std::uint64_t>(restart);
}

std::string config_digest(const SolverConfig& cfg) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%s;kick=%s;k=%d;sg=%d;m=%d;pop=%g:%d:%d:%d;trials=%d;runs=%d;"
                  "budget=%g;inc=%d;breadth=%d",
                  strategy_name(cfg.strategy), kick_name(cfg.kick), cfg.alpha_k,
                  cfg.alpha_use_subgradient ? 1 : 0, cfg.union_m,
                  cfg.pop.sample_fraction, cfg.pop.r, cfg.pop.rebuild_rounds,
                  cfg.pop.runs_for_candidates, cfg.trials, cfg.runs,
                  cfg.budget_seconds, cfg.include_candidate_time ? 1 : 0,
                  cfg.three_opt_breadth);
    std::string out(buf);
    if (cfg.target_length) {
        std::snprintf(buf, sizeof buf, ";target=%.17g", *cfg.target_length);
        out += buf;
    }
    if (cfg.initial_tour) out += ";forced-start";
    return out;
}

bool target_reached(const Instance& inst, double best, double target) {
    if (metric_is_integral(inst.metric())) return best <= target + 1e-9;
    return best <= target + 1e-6 * std::abs(target);
}

namespace {

std::optional<double> effective_target(const Instance& inst, const SolverConfig& cfg) {
    if (cfg.target_length) return cfg.target_length;
    return inst.optimum_length();
}

void validate(const SolverConfig& cfg) {
    if (cfg.runs < 1) throw std::invalid_argument("runs must be at least 1");
    if (cfg.trials < 0) throw std::invalid_argument("trials must be non-negative");
    if (cfg.budget_seconds < 0.0) throw std::invalid_argument("budget must be non-negative");
    if (cfg.three_opt_breadth < 1) throw std::invalid_argument("breadth must be positive");
}

} // namespace

RunResult run_once(const Instance& inst, const CandidateSet& cand, const SolverConfig& cfg,
                   std::uint64_t seed, TimeBudget* budget,
                   const std::vector<int>* forced_initial) {
    validate(cfg);
    const int n = inst.n();
    const int trials = cfg.trials > 0 ? cfg.trials : n;
    const auto target = effective_target(inst, cfg);

    Rng rng(seed);
    std::vector<int> start = forced_initial ? *forced_initial : random_tour(n, rng);
    SearchState st(inst, std::move(start), std::move(rng));

    RunResult res;
    const auto out_of_time = [&] { return budget && budget->exceeded(); };
    const auto solved_now = [&] {
        return target && target_reached(inst, res.best.length, *target);
    };

    descend(inst, st, &cand, cfg.three_opt_breadth, budget);
    res.best = Tour{st.order, st.length};
    res.trials_executed = 1;

    while (!solved_now() && !out_of_time() &&
           res.trials_executed < static_cast<std::uint64_t>(trials)) {
        if (cfg.kick == KickKind::DOUBLE_BRIDGE)
            double_bridge(st);
        else
            constrained_restart_kick(st, res.best);
        descend(inst, st, &cand, cfg.three_opt_breadth, budget);
        ++res.trials_executed;
        if (st.length < res.best.length) res.best = Tour{st.order, st.length};
    }

    res.solved = solved_now();
    return res;
}

RunResult solve(const Instance& inst, const SolverConfig& cfg, int fold) {
    validate(cfg);
    const double limit = cfg.budget_seconds > 0.0
                             ? cfg.budget_seconds
                             : std::numeric_limits<double>::infinity();
    TimeBudget budget(limit);

    using clock = std::chrono::steady_clock;
    const auto build = [&](int restart) {
        const auto t0 = clock::now();
        CandidateSet cand;
        switch (cfg.strategy) {
            case Strategy::ALPHA_FIXED:
                cand = alpha_candidates(inst, cfg.alpha_k, cfg.alpha_use_subgradient);
                break;
            case Strategy::TWO_OPT_FIXED:
                cand = two_opt_union(inst, cfg.union_m, derive_seed(fold, 0));
                break;
            case Strategy::POP_FIXED:
                cand = popmusic_candidates(inst, derive_seed(fold, 0), cfg.pop);
                break;
            case Strategy::POP_RESTART:
                cand = popmusic_candidates(inst, derive_seed(fold, restart), cfg.pop);
                break;
        }
        if (!cfg.include_candidate_time)
            budget.credit(std::chrono::duration<double>(clock::now() - t0).count());
        return cand;
    };

    RunResult total;
    total.best.length = std::numeric_limits<double>::infinity();
    CandidateSet cand = build(0);

    for (int r = 0; r < cfg.runs; ++r) {
        if (r > 0 && cfg.strategy == Strategy::POP_RESTART) cand = build(r);
        const std::vector<int>* forced =
            (r == 0 && cfg.initial_tour) ? &*cfg.initial_tour : nullptr;
        RunResult one = run_once(inst, cand, cfg, derive_seed(fold, r), &budget, forced);
        total.trials_executed += one.trials_executed;
        total.restarts_used = r;
        if (one.best.length < total.best.length) total.best = std::move(one.best);
        if (one.solved) {
            total.solved = true;
            break;
        }
        if (budget.exceeded()) break;
    }

    total.elapsed_seconds =
        (!total.solved && budget.exceeded()) ? cfg.budget_seconds : budget.elapsed();
    total.candidates = std::move(cand);
    return total;
}

RunRecord solve_record(const Instance& inst, const SolverConfig& cfg, int fold,
                       const std::optional<Tour>& optimal) {
    RunRecord rec;
    rec.instance = inst.name();
    rec.config = config_digest(cfg);
    rec.fold = fold;
    rec.seed = derive_seed(fold, 0);

    RunResult res = solve(inst, cfg, fold);
    rec.solved = res.solved;
    rec.elapsed_seconds = res.elapsed_seconds;
    rec.best_length = res.best.length;
    rec.trials_executed = res.trials_executed;
    rec.restarts_used = res.restarts_used;

    if (optimal) {
        // the restart-0 candidate set decides what is missing "at start"
        CandidateSet first;
        switch (cfg.strategy) {
            case Strategy::ALPHA_FIXED:
                first = alpha_candidates(inst, cfg.alpha_k, cfg.alpha_use_subgradient);
                break;
            case Strategy::TWO_OPT_FIXED:
                first = two_opt_union(inst, cfg.union_m, derive_seed(fold, 0));
                break;
            case Strategy::POP_FIXED:
            case Strategy::POP_RESTART:
                first = popmusic_candidates(inst, derive_seed(fold, 0), cfg.pop);
                break;
        }
        rec.missing_edges_at_start = missing_optimal_edges(first, *optimal).count;
    }
    return rec;
}

std::string run_record_csv_header() {
    return "instance,config,fold,seed,solved,elapsed_seconds,best_length,"
           "trials_executed,restarts_used,missing_edges_at_start";
}

std::string run_record_csv_row(const RunRecord& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%s,%d,%llu,%d,%.17g,%.17g,%llu,%d,%d",
                  r.instance.c_str(), r.config.c_str(), r.fold,
                  static_cast<unsigned long long>(r.seed), r.solved ? 1 : 0,
                  r.elapsed_seconds, r.best_length,
                  static_cast<unsigned long long>(r.trials_executed), r.restarts_used,
                  r.missing_edges_at_start);
    return std::string(buf);
}

} // namespace lktsp
