#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lktsp/candidates.hpp"
#include "lktsp/instance.hpp"
#include "lktsp/localsearch.hpp"
#include "lktsp/popmusic.hpp"

namespace lktsp {

enum class Strategy {
    ALPHA_FIXED,
    TWO_OPT_FIXED,
    POP_FIXED,
    POP_RESTART,
};

enum class KickKind {
    DOUBLE_BRIDGE,
    CONSTRAINED_RANDOM,
};

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& s);
const char* kick_name(KickKind k);
KickKind kick_from_name(const std::string& s);

struct SolverConfig {
    Strategy strategy = Strategy::ALPHA_FIXED;
    KickKind kick = KickKind::DOUBLE_BRIDGE;
    int alpha_k = 5;
    bool alpha_use_subgradient = true;
    int union_m = 100;
    PopmusicParams pop;
    int trials = 0;      // 0: use n
    int runs = 1;        // restarts = runs - 1
    double budget_seconds = 0.0;  // 0: unlimited
    bool include_candidate_time = false;
    std::optional<double> target_length;
    int three_opt_breadth = 5;
    // forced starting tour for the first run (diagnostics); later runs random
    std::optional<std::vector<int>> initial_tour;
};

// distinct rng streams per (fold, restart); fold is 1-based
std::uint64_t derive_seed(int fold, int restart);

std::string config_digest(const SolverConfig& cfg);

struct RunRecord {
    std::string instance;
    std::string config;
    int fold = 0;
    std::uint64_t seed = 0;
    bool solved = false;
    double elapsed_seconds = 0.0;
    double best_length = 0.0;
    std::uint64_t trials_executed = 0;
    int restarts_used = 0;
    int missing_edges_at_start = -1;  // -1: not evaluated
};

std::string run_record_csv_header();
std::string run_record_csv_row(const RunRecord& r);

struct RunResult {
    Tour best;
    bool solved = false;
    double elapsed_seconds = 0.0;
    std::uint64_t trials_executed = 0;
    int restarts_used = 0;
    CandidateSet candidates;  // the set used by the final run
};

bool target_reached(const Instance& inst, double best, double target);

// one kick-restart chain: descend, then trials x (kick, descend), keeping best
RunResult run_once(const Instance& inst, const CandidateSet& cand, const SolverConfig& cfg,
                   std::uint64_t seed, TimeBudget* budget,
                   const std::vector<int>* forced_initial = nullptr);

RunResult solve(const Instance& inst, const SolverConfig& cfg, int fold);
RunRecord solve_record(const Instance& inst, const SolverConfig& cfg, int fold,
                       const std::optional<Tour>& optimal = std::nullopt);

} // namespace lktsp
