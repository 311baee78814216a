#pragma once

#include <chrono>
#include <optional>
#include <unordered_set>
#include <vector>

#include "lktsp/candidates.hpp"
#include "lktsp/instance.hpp"
#include "lktsp/rng.hpp"

namespace lktsp {

// wall-clock budget; credit() extends the deadline to exclude setup work
class TimeBudget {
public:
    explicit TimeBudget(double seconds)
        : budget_(seconds), start_(clock::now()), credited_(0.0) {}

    double elapsed() const {
        return std::chrono::duration<double>(clock::now() - start_).count() - credited_;
    }
    bool exceeded() const { return elapsed() >= budget_; }
    void credit(double seconds) { credited_ += seconds; }
    double budget() const { return budget_; }

private:
    using clock = std::chrono::steady_clock;
    double budget_;
    clock::time_point start_;
    double credited_;
};

struct MoveRecord {
    char kind = '?';  // '2' two-opt, '3' sequential three-opt, 'K' kick
    double gain = 0.0;
    std::vector<EdgeKey> removed, added;
};

struct SearchState {
    const Instance* inst = nullptr;
    std::vector<int> order;
    std::vector<int> pos;  // pos[order[k]] == k
    std::vector<std::uint8_t> dont_look;
    Rng rng;
    std::unordered_set<EdgeKey> fixed_edges;  // empty means unconstrained
    double length = 0.0;

    SearchState(const Instance& inst_, std::vector<int> order_, std::uint64_t seed);
    SearchState(const Instance& inst_, std::vector<int> order_, Rng rng_);

    int n() const { return static_cast<int>(order.size()); }
    int succ(int city) const { return order[(pos[city] + 1) % n()]; }
    int pred(int city) const { return order[(pos[city] + n() - 1) % n()]; }
    void set_order(std::vector<int> order_);
    void clear_dont_look();
    bool consistent() const;  // order/pos agreement, for debug checks
};

std::vector<int> random_tour(int n, Rng& rng);

// first-improvement 2-opt with don't-look bits; candidate partner scans when
// cand is given, full scans otherwise. The non-candidate added edge of each
// exchange is the closing edge. Stops early when budget is exhausted
// (checked every 1000 accepted moves).
void two_opt_descent(const Instance& inst, SearchState& st, const CandidateSet* cand,
                     TimeBudget* budget = nullptr, std::vector<MoveRecord>* log = nullptr);

// one improving sequential move of depth <= 3; added edges come from the
// candidate lists except the closing edge. Applies the best move among the
// first anchor that admits one (best of `breadth` partners per extension).
bool sequential_three_opt_step(const Instance& inst, SearchState& st,
                               const CandidateSet& cand, int breadth,
                               std::vector<MoveRecord>* log = nullptr);

// 2-opt then 3-opt steps until neither improves
void descend(const Instance& inst, SearchState& st, const CandidateSet* cand,
             int breadth, TimeBudget* budget = nullptr,
             std::vector<MoveRecord>* log = nullptr);

// pure double-bridge reconnection at cuts 0 < p1 < p2 < p3 < n:
// A B C D -> A D C B
std::vector<int> double_bridge_apply(const std::vector<int>& order, int p1, int p2, int p3);

// random double bridge: samples cut triples until the reconnection changes
// exactly 4 edges (up to 64 tries, then leaves the tour unchanged; n <= 5
// admits no such triple, so small instances keep their tour)
void double_bridge(SearchState& st, std::vector<MoveRecord>* log = nullptr);

// fresh random tour; edges of `best` become fixed (descents won't remove them)
void constrained_restart_kick(SearchState& st, const Tour& best,
                              std::vector<MoveRecord>* log = nullptr);

// properly crossing tour-edge pairs (shared endpoints excluded); exact metric only
int crossing_count(const Instance& inst, const std::vector<int>& order);

// gain threshold: rounded metrics are integral, exact metrics use a float guard
inline double gain_tolerance(Metric m) {
    return metric_is_integral(m) ? 0.5 : 1e-10;
}

} // namespace lktsp
