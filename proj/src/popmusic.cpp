#include "lktsp/popmusic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lktsp/localsearch.hpp"
#include "lktsp/rng.hpp"

namespace lktsp {

int popmusic_sample_size(int n, const PopmusicParams& p) {
    if (p.sample_fraction <= 0.0 || p.sample_fraction > 1.0)
        throw std::invalid_argument("sample_fraction must be in (0, 1]");
    const int want = static_cast<int>(std::ceil(p.sample_fraction * n));
    return std::min(n, std::max(3, want));
}

namespace {

// path 2-opt over tour positions [first, first+len) taken cyclically; the two
// path endpoints stay fixed, so edges outside the window are never touched
bool window_two_opt(const Instance& inst, std::vector<int>& order, int first, int len,
                    double tol) {
    const int n = static_cast<int>(order.size());
    if (len > n) len = n;
    if (len < 4) return false;

    std::vector<int> path(len);
    for (int k = 0; k < len; ++k) path[k] = order[(first + k) % n];

    bool any = false, improved = true;
    while (improved) {
        improved = false;
        for (int i = 1; i + 2 < len; ++i) {
            for (int j = i + 1; j + 1 < len; ++j) {
                const double before =
                    inst.dist(path[i - 1], path[i]) + inst.dist(path[j], path[j + 1]);
                const double after =
                    inst.dist(path[i - 1], path[j]) + inst.dist(path[i], path[j + 1]);
                if (before - after > tol) {
                    std::reverse(path.begin() + i, path.begin() + j + 1);
                    improved = true;
                    any = true;
                }
            }
        }
    }
    if (any)
        for (int k = 0; k < len; ++k) order[(first + k) % n] = path[k];
    return any;
}

} // namespace

Tour popmusic_tour(const Instance& inst, std::uint64_t seed, const PopmusicParams& p) {
    const int n = inst.n();
    if (n < 4) throw std::invalid_argument("popmusic needs at least 4 cities");
    if (p.r < 3) throw std::invalid_argument("subpath window must be at least 3");
    const int s = popmusic_sample_size(n, p);
    const double tol = gain_tolerance(inst.metric());

    Rng rng(seed);
    const std::vector<int> shuffled = random_tour(n, rng);
    std::vector<int> order(shuffled.begin(), shuffled.begin() + s);

    // skeleton tour over the sample, optimized in isolation
    {
        std::vector<double> xs(s), ys(s);
        for (int k = 0; k < s; ++k) {
            xs[k] = inst.x(order[k]);
            ys[k] = inst.y(order[k]);
        }
        Instance sub = make_instance(inst.name() + "#sample", inst.metric(),
                                     std::move(xs), std::move(ys));
        std::vector<int> local(s);
        std::iota(local.begin(), local.end(), 0);
        SearchState st(sub, std::move(local), rng);
        auto cand = nearest_candidates(sub, std::min(8, s - 1));
        descend(sub, st, &cand, 5);
        std::vector<int> reordered(s);
        for (int k = 0; k < s; ++k) reordered[k] = order[st.order[k]];
        order.swap(reordered);
    }

    // out-of-tour cities join nearest-to-tour first, at their cheapest edge
    std::vector<int> rest(shuffled.begin() + s, shuffled.end());
    std::vector<double> near(n, std::numeric_limits<double>::infinity());
    for (int c : rest)
        for (int t : order) near[c] = std::min(near[c], inst.dist(c, t));

    while (!rest.empty()) {
        std::size_t pick = 0;
        for (std::size_t k = 1; k < rest.size(); ++k) {
            const int c = rest[k], b = rest[pick];
            if (near[c] < near[b] || (near[c] == near[b] && c < b)) pick = k;
        }
        const int c = rest[pick];
        rest.erase(rest.begin() + pick);

        const int len = static_cast<int>(order.size());
        int best_k = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int k = 0; k < len; ++k) {
            const int u = order[k], v = order[(k + 1) % len];
            const double cost = inst.dist(u, c) + inst.dist(c, v) - inst.dist(u, v);
            if (cost < best_cost) {
                best_cost = cost;
                best_k = k;
            }
        }
        order.insert(order.begin() + best_k + 1, c);

        for (int o : rest) near[o] = std::min(near[o], inst.dist(o, c));

        const int grown = len + 1;
        const int w = std::min(p.r, grown);
        int first = (best_k + 1 - w / 2) % grown;
        if (first < 0) first += grown;
        window_two_opt(inst, order, first, w, tol);
    }

    // sliding sub-path passes until a full pass stops improving
    const int w = std::min(p.r, n);
    for (int round = 0; round < p.rebuild_rounds; ++round) {
        bool any = false;
        for (int start = 0; start < n; ++start)
            any = window_two_opt(inst, order, start, w, tol) || any;
        if (!any) break;
    }

    return make_tour(inst, std::move(order));
}

CandidateSet popmusic_candidates(const Instance& inst, std::uint64_t seed,
                                 const PopmusicParams& p) {
    if (p.runs_for_candidates < 1) throw std::invalid_argument("need at least one run");
    std::vector<Tour> tours;
    tours.reserve(p.runs_for_candidates);
    for (int t = 0; t < p.runs_for_candidates; ++t)
        tours.push_back(popmusic_tour(inst, seed + static_cast<std::uint64_t>(t), p));
    CandidateSet set = union_from_tours(inst, tours);
    set.tag = Generator::POPMUSIC;
    return set;
}

} // namespace lktsp
