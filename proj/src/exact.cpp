#include "lktsp/exact.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace lktsp {

ExactResult held_karp_dp(const Instance& inst) {
    const int n = inst.n();
    if (n > 15) throw std::invalid_argument("held_karp_dp limited to n <= 15");

    // city 0 is the fixed start; masks range over subsets of cities 1..n-1
    const int m = n - 1;
    const std::size_t nmask = std::size_t{1} << m;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(nmask * m, inf);
    std::vector<std::int8_t> par(nmask * m, -1);

    for (int j = 0; j < m; ++j) {
        dp[(std::size_t{1} << j) * m + j] = inst.dist(0, j + 1);
    }
    for (std::size_t mask = 1; mask < nmask; ++mask) {
        for (int j = 0; j < m; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            double cur = dp[mask * m + j];
            if (cur == inf) continue;
            for (int k = 0; k < m; ++k) {
                if (mask & (std::size_t{1} << k)) continue;
                std::size_t nxt = mask | (std::size_t{1} << k);
                double cand = cur + inst.dist(j + 1, k + 1);
                if (cand < dp[nxt * m + k]) {
                    dp[nxt * m + k] = cand;
                    par[nxt * m + k] = static_cast<std::int8_t>(j);
                }
            }
        }
    }

    const std::size_t full = nmask - 1;
    double best = inf;
    int best_last = -1;
    for (int j = 0; j < m; ++j) {
        double cand = dp[full * m + j] + inst.dist(j + 1, 0);
        if (cand < best) {
            best = cand;
            best_last = j;
        }
    }

    std::vector<int> order(n);
    order[0] = 0;
    std::size_t mask = full;
    int j = best_last;
    for (int slot = n - 1; slot >= 1; --slot) {
        order[slot] = j + 1;
        int p = par[mask * m + j];
        mask &= ~(std::size_t{1} << j);
        j = p;
    }

    ExactResult res;
    res.tour = make_tour(inst, std::move(order));
    res.length = best;
    res.limit_respected = true;
    return res;
}

ExactResult brute_force(const Instance& inst) {
    const int n = inst.n();
    if (n > 10) throw std::invalid_argument("brute_force limited to n <= 10");

    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::vector<int> best_order = perm;
    double best = tour_length(inst, perm);

    // fix city 0 first; skip reversed duplicates by requiring perm[1] < perm[n-1]
    std::vector<int> rest(perm.begin() + 1, perm.end());
    do {
        if (rest.front() > rest.back()) continue;
        std::vector<int> order;
        order.reserve(n);
        order.push_back(0);
        order.insert(order.end(), rest.begin(), rest.end());
        double len = tour_length(inst, order);
        if (len < best) {
            best = len;
            best_order = order;
        }
    } while (std::next_permutation(rest.begin(), rest.end()));

    ExactResult res;
    res.tour = make_tour(inst, std::move(best_order));
    res.length = best;
    res.limit_respected = true;
    return res;
}

} // namespace lktsp
