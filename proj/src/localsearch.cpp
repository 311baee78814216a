#include "lktsp/localsearch.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

namespace lktsp {

SearchState::SearchState(const Instance& inst_, std::vector<int> order_, std::uint64_t seed)
    : SearchState(inst_, std::move(order_), Rng(seed)) {}

SearchState::SearchState(const Instance& inst_, std::vector<int> order_, Rng rng_)
    : inst(&inst_), rng(rng_) {
    set_order(std::move(order_));
}

void SearchState::set_order(std::vector<int> order_) {
    if (!is_permutation(order_, inst->n()))
        throw std::invalid_argument("order is not a permutation of the instance cities");
    order = std::move(order_);
    pos.assign(order.size(), 0);
    for (int k = 0; k < n(); ++k) pos[order[k]] = k;
    dont_look.assign(order.size(), 0);
    length = tour_length(*inst, order);
}

void SearchState::clear_dont_look() {
    std::fill(dont_look.begin(), dont_look.end(), 0);
}

bool SearchState::consistent() const {
    if (!is_permutation(order, inst->n())) return false;
    for (int k = 0; k < n(); ++k)
        if (pos[order[k]] != k) return false;
    return true;
}

std::vector<int> random_tour(int n, Rng& rng) {
    if (n < 3) throw std::invalid_argument("tours need at least 3 cities");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    return order;
}

namespace {

// reverse the cyclic position range [a, b], taking the shorter side
void reverse_positions(SearchState& st, int a, int b) {
    const int n = st.n();
    int len = (b - a + n) % n + 1;
    if (2 * len > n) {
        const int a2 = (b + 1) % n;
        const int b2 = (a - 1 + n) % n;
        a = a2;
        b = b2;
        len = n - len;
    }
    for (int k = 0; k < len / 2; ++k) {
        const int i = (a + k) % n;
        const int j = (b - k + n) % n;
        std::swap(st.order[i], st.order[j]);
        st.pos[st.order[i]] = i;
        st.pos[st.order[j]] = j;
    }
}

struct TwoOptScanner {
    const Instance& inst;
    SearchState& st;
    const CandidateSet* cand;
    TimeBudget* budget;
    std::vector<MoveRecord>* log;
    double tol;
    long accepted = 0;
    bool out_of_time = false;

    bool edge_fixed(EdgeKey k) const {
        return !st.fixed_edges.empty() && st.fixed_edges.count(k) > 0;
    }

    // one improving exchange anchored at t1 in the given direction
    bool try_direction(int t1, bool forward) {
        const int t2 = forward ? st.succ(t1) : st.pred(t1);
        const EdgeKey e1 = edge_key(t1, t2);
        if (edge_fixed(e1)) return false;
        const double d12 = inst.dist(t1, t2);

        auto attempt = [&](int t3) -> bool {
            if (t3 == t1 || t3 == t2) return false;
            const double g1 = d12 - inst.dist(t2, t3);
            if (g1 <= 0.0) return false;
            const int t4 = forward ? st.pred(t3) : st.succ(t3);
            if (t4 == t2) return false;
            const EdgeKey e2 = edge_key(t3, t4);
            if (edge_fixed(e2)) return false;
            const double gain = g1 + inst.dist(t3, t4) - inst.dist(t4, t1);
            if (gain <= tol) return false;

            if (forward) reverse_positions(st, st.pos[t2], st.pos[t4]);
            else reverse_positions(st, st.pos[t1], st.pos[t3]);
            st.length -= gain;
            st.dont_look[t1] = st.dont_look[t2] = 0;
            st.dont_look[t3] = st.dont_look[t4] = 0;
            if (log)
                log->push_back({'2', gain, {e1, e2},
                                {edge_key(t2, t3), edge_key(t4, t1)}});
            if (budget && ++accepted % 1000 == 0 && budget->exceeded())
                out_of_time = true;
            return true;
        };

        if (cand) {
            for (const Candidate& c : cand->lists[t2])
                if (attempt(c.to)) return true;
        } else {
            for (int t3 = 0; t3 < st.n(); ++t3)
                if (attempt(t3)) return true;
        }
        return false;
    }

    // exhaust improving exchanges anchored at t1
    bool scan_city(int t1) {
        bool any = false;
        while (!out_of_time && (try_direction(t1, true) || try_direction(t1, false)))
            any = true;
        return any;
    }
};

} // namespace

void two_opt_descent(const Instance& inst, SearchState& st, const CandidateSet* cand,
                     TimeBudget* budget, std::vector<MoveRecord>* log) {
    if (budget && budget->exceeded()) return;
    TwoOptScanner scan{inst, st, cand, budget, log, gain_tolerance(inst.metric())};
    const int n = st.n();
    bool verified = false;
    while (!scan.out_of_time) {
        bool any = false;
        for (int t1 = 0; t1 < n && !scan.out_of_time; ++t1) {
            if (st.dont_look[t1]) continue;
            if (scan.scan_city(t1)) any = true;
            else st.dont_look[t1] = 1;
        }
        if (any) {
            verified = false;
            continue;
        }
        if (verified) break;
        // don't-look bits can hide a move whose anchors are all asleep;
        // one clean full pass certifies the local optimum
        st.clear_dont_look();
        verified = true;
    }
    st.length = tour_length(inst, st.order);
}

namespace {

struct ThreeOptMove {
    double gain = -1.0;
    std::vector<EdgeKey> removed;             // 2 or 3 distinct tour edges
    std::vector<std::pair<int, int>> added;   // same count, distinct new edges
};

// does replacing `removed` by `added` in the tour leave a single n-cycle?
bool still_one_cycle(const SearchState& st, const std::vector<EdgeKey>& removed,
                     const std::vector<std::pair<int, int>>& added) {
    const int n = st.n();
    auto is_removed = [&](int a, int b) {
        const EdgeKey k = edge_key(a, b);
        for (EdgeKey r : removed)
            if (k == r) return true;
        return false;
    };
    // adjusted neighbors of a city: tour neighbors minus removals plus additions
    auto neighbors = [&](int v, int out[3]) -> int {
        int cnt = 0;
        const int s = st.succ(v), p = st.pred(v);
        if (!is_removed(v, s)) out[cnt++] = s;
        if (!is_removed(v, p)) out[cnt++] = p;
        for (const auto& [a, b] : added) {
            if (a == v) {
                if (cnt >= 3) return 3;
                out[cnt++] = b;
            } else if (b == v) {
                if (cnt >= 3) return 3;
                out[cnt++] = a;
            }
        }
        return cnt;
    };
    int prev = added[0].first;
    int nb[3];
    if (neighbors(prev, nb) != 2) return false;
    int cur = nb[0];
    for (int steps = 1; steps < n; ++steps) {
        if (cur == added[0].first) return false;  // early return: short cycle
        if (neighbors(cur, nb) != 2) return false;
        const int next = (nb[0] == prev) ? nb[1] : nb[0];
        if (nb[0] != prev && nb[1] != prev) return false;
        prev = cur;
        cur = next;
    }
    return cur == added[0].first;
}

void apply_three_opt(const Instance& inst, SearchState& st, const ThreeOptMove& mv,
                     std::vector<MoveRecord>* log) {
    const int n = st.n();
    auto is_removed = [&](int a, int b) {
        const EdgeKey k = edge_key(a, b);
        for (EdgeKey r : mv.removed)
            if (k == r) return true;
        return false;
    };
    std::vector<std::array<int, 2>> adj(n, {-1, -1});
    auto link = [&](int a, int b) {
        adj[a][adj[a][0] < 0 ? 0 : 1] = b;
        adj[b][adj[b][0] < 0 ? 0 : 1] = a;
    };
    for (int k = 0; k < n; ++k) {
        const int a = st.order[k];
        const int b = st.order[(k + 1) % n];
        if (!is_removed(a, b)) link(a, b);
    }
    for (const auto& [a, b] : mv.added) link(a, b);

    std::vector<int> order(n);
    order[0] = 0;
    order[1] = std::min(adj[0][0], adj[0][1]);
    for (int k = 2; k < n; ++k) {
        const int cur = order[k - 1], prev = order[k - 2];
        order[k] = (adj[cur][0] == prev) ? adj[cur][1] : adj[cur][0];
    }
    st.order = std::move(order);
    for (int k = 0; k < n; ++k) st.pos[st.order[k]] = k;
    st.length = tour_length(inst, st.order);
    for (const auto& [a, b] : mv.added) st.dont_look[a] = st.dont_look[b] = 0;
    for (EdgeKey k : mv.removed) {
        st.dont_look[edge_lo(k)] = 0;
        st.dont_look[edge_hi(k)] = 0;
    }
    if (log) {
        MoveRecord rec{mv.removed.size() == 2 ? '2' : '3', mv.gain, mv.removed, {}};
        for (const auto& [a, b] : mv.added) rec.added.push_back(edge_key(a, b));
        log->push_back(std::move(rec));
    }
}

} // namespace

bool sequential_three_opt_step(const Instance& inst, SearchState& st,
                               const CandidateSet& cand, int breadth,
                               std::vector<MoveRecord>* log) {
    if (breadth < 1) throw std::invalid_argument("breadth must be positive");
    const double tol = gain_tolerance(inst.metric());
    const int n = st.n();
    auto fixed = [&](int a, int b) {
        return !st.fixed_edges.empty() && st.fixed_edges.count(edge_key(a, b)) > 0;
    };

    for (int t1 = 0; t1 < n; ++t1) {
        ThreeOptMove best;
        for (int dir = 0; dir < 2; ++dir) {
            const bool forward = dir == 0;
            const int t2 = forward ? st.succ(t1) : st.pred(t1);
            if (fixed(t1, t2)) continue;
            const double d12 = inst.dist(t1, t2);

            int tried3 = 0;
            for (const Candidate& c3 : cand.lists[t2]) {
                if (tried3 >= breadth) break;
                const int t3 = c3.to;
                if (t3 == t1 || t3 == t2) continue;
                const double g1 = d12 - inst.dist(t2, t3);
                if (g1 <= 0.0) continue;
                ++tried3;

                // depth-2 completion: close immediately
                {
                    const int t4 = forward ? st.pred(t3) : st.succ(t3);
                    if (t4 != t2 && !fixed(t3, t4)) {
                        const double gain = g1 + inst.dist(t3, t4) - inst.dist(t4, t1);
                        if (gain > tol && gain > best.gain) {
                            // a 2-exchange is always a valid reconnection
                            best.gain = gain;
                            best.removed = {edge_key(t1, t2), edge_key(t3, t4)};
                            best.added = {{t2, t3}, {t4, t1}};
                        }
                    }
                }

                // depth-3: break one of t3's tour edges, extend from t4
                for (int side4 = 0; side4 < 2; ++side4) {
                    const int t4 = side4 == 0 ? st.succ(t3) : st.pred(t3);
                    if (t4 == t1 || t4 == t2) continue;
                    if (fixed(t3, t4)) continue;
                    const double g2base = g1 + inst.dist(t3, t4);

                    int tried5 = 0;
                    for (const Candidate& c5 : cand.lists[t4]) {
                        if (tried5 >= breadth) break;
                        const int t5 = c5.to;
                        if (t5 == t1 || t5 == t2 || t5 == t3 || t5 == t4) continue;
                        const double g2 = g2base - inst.dist(t4, t5);
                        if (g2 <= 0.0) continue;
                        ++tried5;

                        for (int side6 = 0; side6 < 2; ++side6) {
                            const int t6 = side6 == 0 ? st.succ(t5) : st.pred(t5);
                            if (t6 == t1 || t6 == t2 || t6 == t3 || t6 == t4) continue;
                            if (fixed(t5, t6)) continue;
                            const double gain =
                                g2 + inst.dist(t5, t6) - inst.dist(t6, t1);
                            if (gain <= tol || gain <= best.gain) continue;
                            ThreeOptMove mv;
                            mv.gain = gain;
                            mv.removed = {edge_key(t1, t2), edge_key(t3, t4),
                                          edge_key(t5, t6)};
                            mv.added = {{t2, t3}, {t4, t5}, {t6, t1}};
                            if (still_one_cycle(st, mv.removed, mv.added))
                                best = std::move(mv);
                        }
                    }
                }
            }
        }
        if (best.gain > tol) {
            apply_three_opt(inst, st, best, log);
            return true;
        }
    }
    return false;
}

void descend(const Instance& inst, SearchState& st, const CandidateSet* cand,
             int breadth, TimeBudget* budget, std::vector<MoveRecord>* log) {
    while (true) {
        two_opt_descent(inst, st, cand, budget, log);
        if (budget && budget->exceeded()) return;
        if (!cand) return;
        if (!sequential_three_opt_step(inst, st, *cand, breadth, log)) return;
        if (budget && budget->exceeded()) return;
    }
}

std::vector<int> double_bridge_apply(const std::vector<int>& order, int p1, int p2,
                                     int p3) {
    const int n = static_cast<int>(order.size());
    if (!(0 < p1 && p1 < p2 && p2 < p3 && p3 < n))
        throw std::invalid_argument("cuts must satisfy 0 < p1 < p2 < p3 < n");
    std::vector<int> out;
    out.reserve(n);
    out.insert(out.end(), order.begin(), order.begin() + p1);        // A
    out.insert(out.end(), order.begin() + p3, order.end());          // D
    out.insert(out.end(), order.begin() + p2, order.begin() + p3);   // C
    out.insert(out.end(), order.begin() + p1, order.begin() + p2);   // B
    return out;
}

namespace {

std::vector<EdgeKey> tour_edge_keys(const std::vector<int>& order) {
    std::vector<EdgeKey> keys;
    keys.reserve(order.size());
    const int n = static_cast<int>(order.size());
    for (int k = 0; k < n; ++k) keys.push_back(edge_key(order[k], order[(k + 1) % n]));
    std::sort(keys.begin(), keys.end());
    return keys;
}

} // namespace

void double_bridge(SearchState& st, std::vector<MoveRecord>* log) {
    const int n = st.n();
    for (int attempt = 0; attempt < 64; ++attempt) {
        const int p1 = 1 + static_cast<int>(st.rng.next_below(n - 1));
        const int p2 = 1 + static_cast<int>(st.rng.next_below(n - 1));
        const int p3 = 1 + static_cast<int>(st.rng.next_below(n - 1));
        int a = p1, b = p2, c = p3;
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        if (a == b || b == c) continue;

        // the reconnection must change exactly 4 tour edges
        const std::array<EdgeKey, 4> removed{
            edge_key(st.order[a - 1], st.order[a]),
            edge_key(st.order[b - 1], st.order[b]),
            edge_key(st.order[c - 1], st.order[c]),
            edge_key(st.order[n - 1], st.order[0])};
        const std::array<EdgeKey, 4> added{
            edge_key(st.order[a - 1], st.order[c]),
            edge_key(st.order[n - 1], st.order[b]),
            edge_key(st.order[c - 1], st.order[a]),
            edge_key(st.order[b - 1], st.order[0])};
        auto distinct4 = [](const std::array<EdgeKey, 4>& k) {
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    if (k[i] == k[j]) return false;
            return true;
        };
        bool disjoint = true;
        for (EdgeKey r : removed)
            for (EdgeKey ad : added)
                if (r == ad) disjoint = false;
        if (!distinct4(removed) || !distinct4(added) || !disjoint) continue;

        const double before = st.length;
        std::vector<int> kicked = double_bridge_apply(st.order, a, b, c);
        st.set_order(std::move(kicked));
        if (log)
            log->push_back({'K', before - st.length,
                            {removed.begin(), removed.end()},
                            {added.begin(), added.end()}});
        return;
    }
    // no valid triple found (always the case for n <= 5): keep the tour
}

void constrained_restart_kick(SearchState& st, const Tour& best,
                              std::vector<MoveRecord>* log) {
    if (static_cast<int>(best.order.size()) != st.n())
        throw std::invalid_argument("best tour size mismatch");
    const double before = st.length;
    const std::vector<EdgeKey> old_keys = tour_edge_keys(st.order);

    std::vector<int> fresh = random_tour(st.n(), st.rng);
    st.set_order(std::move(fresh));

    st.fixed_edges.clear();
    const int n = st.n();
    for (int k = 0; k < n; ++k)
        st.fixed_edges.insert(edge_key(best.order[k], best.order[(k + 1) % n]));

    if (log) {
        const std::vector<EdgeKey> new_keys = tour_edge_keys(st.order);
        MoveRecord rec{'K', before - st.length, {}, {}};
        std::set_difference(old_keys.begin(), old_keys.end(), new_keys.begin(),
                            new_keys.end(), std::back_inserter(rec.removed));
        std::set_difference(new_keys.begin(), new_keys.end(), old_keys.begin(),
                            old_keys.end(), std::back_inserter(rec.added));
        log->push_back(std::move(rec));
    }
}

namespace {

int orient_sign(double ax, double ay, double bx, double by, double cx, double cy) {
    const double v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
}

} // namespace

int crossing_count(const Instance& inst, const std::vector<int>& order) {
    if (inst.metric() != Metric::EUC_2D_EXACT)
        throw std::invalid_argument("crossing count needs planar exact distances");
    if (!is_permutation(order, inst.n()))
        throw std::invalid_argument("order is not a permutation");
    const int n = inst.n();
    int count = 0;
    for (int i = 0; i < n; ++i) {
        const int a = order[i], b = order[(i + 1) % n];
        for (int j = i + 1; j < n; ++j) {
            const int c = order[j], d = order[(j + 1) % n];
            if (a == c || a == d || b == c || b == d) continue;
            const int o1 = orient_sign(inst.x(a), inst.y(a), inst.x(b), inst.y(b),
                                       inst.x(c), inst.y(c));
            const int o2 = orient_sign(inst.x(a), inst.y(a), inst.x(b), inst.y(b),
                                       inst.x(d), inst.y(d));
            const int o3 = orient_sign(inst.x(c), inst.y(c), inst.x(d), inst.y(d),
                                       inst.x(a), inst.y(a));
            const int o4 = orient_sign(inst.x(c), inst.y(c), inst.x(d), inst.y(d),
                                       inst.x(b), inst.y(b));
            if (o1 * o2 < 0 && o3 * o4 < 0) ++count;
        }
    }
    return count;
}

} // namespace lktsp
