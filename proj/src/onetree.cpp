#include "lktsp/onetree.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lktsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// total order on weighted edges: (weight, edge_key) lexicographic
bool edge_less(double wa, std::uint64_t ka, double wb, std::uint64_t kb) {
    if (wa != wb) return wa < wb;
    return ka < kb;
}

} // namespace

MstResult minimum_spanning_tree(const Instance& inst, const Pi& pi,
                                std::optional<int> exclude) {
    const int n = inst.n();
    if (static_cast<int>(pi.size()) != n) throw std::invalid_argument("pi size mismatch");
    if (exclude) {
        if (*exclude < 0 || *exclude >= n) throw std::invalid_argument("exclude out of range");
        if (n < 4) throw std::invalid_argument("spanning tree with exclusion needs n >= 4");
    }

    MstResult res;
    res.parent.assign(n, -1);
    std::vector<char> done(n, 0);
    std::vector<double> best(n, kInf);
    std::vector<int> src(n, -1);
    if (exclude) done[*exclude] = 1;

    int root = 0;
    while (done[root]) ++root;
    done[root] = 1;

    const int to_add = n - 1 - (exclude ? 1 : 0);
    int u = root;
    for (int added = 0; added < to_add; ++added) {
        for (int v = 0; v < n; ++v) {
            if (done[v]) continue;
            const double w = dist_pi(inst, pi, u, v);
            if (src[v] < 0 || edge_less(w, edge_key(u, v), best[v], edge_key(src[v], v))) {
                best[v] = w;
                src[v] = u;
            }
        }
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (done[v]) continue;
            if (pick < 0 ||
                edge_less(best[v], edge_key(src[v], v), best[pick], edge_key(src[pick], pick)))
                pick = v;
        }
        done[pick] = 1;
        res.parent[pick] = src[pick];
        res.length += best[pick];
        u = pick;
    }
    return res;
}

int default_special(const Instance& inst, const Pi& pi) {
    const int n = inst.n();
    if (static_cast<int>(pi.size()) != n) throw std::invalid_argument("pi size mismatch");
    int pick = -1;
    double pick_second = -kInf;
    for (int i = 0; i < n; ++i) {
        double first = kInf, second = kInf;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double w = dist_pi(inst, pi, i, j);
            if (w < first) {
                second = first;
                first = w;
            } else if (w < second) {
                second = w;
            }
        }
        if (second > pick_second) {
            pick_second = second;
            pick = i;
        }
    }
    return pick;
}

bool OneTree::has_tree_edge(int i, int j) const {
    if (i == j) return false;
    if (i >= 0 && i < static_cast<int>(parent.size()) && parent[i] == j) return true;
    if (j >= 0 && j < static_cast<int>(parent.size()) && parent[j] == i) return true;
    for (const TreeEdge& e : extra)
        if ((e.a == i && e.b == j) || (e.a == j && e.b == i)) return true;
    return false;
}

OneTree minimum_one_tree(const Instance& inst, const Pi& pi, std::optional<int> special) {
    const int n = inst.n();
    if (n < 4) throw std::invalid_argument("one-tree needs n >= 4");
    const int s = special ? *special : default_special(inst, pi);
    if (s < 0 || s >= n) throw std::invalid_argument("special out of range");

    MstResult mst = minimum_spanning_tree(inst, pi, s);

    OneTree t;
    t.parent = std::move(mst.parent);
    t.special = s;
    t.pi = pi;

    // special's two cheapest incident edges under (weight, edge_key)
    int b0 = -1, b1 = -1;
    double w0 = kInf, w1 = kInf;
    for (int j = 0; j < n; ++j) {
        if (j == s) continue;
        const double w = dist_pi(inst, pi, s, j);
        if (b0 < 0 || edge_less(w, edge_key(s, j), w0, edge_key(s, b0))) {
            b1 = b0;
            w1 = w0;
            b0 = j;
            w0 = w;
        } else if (b1 < 0 || edge_less(w, edge_key(s, j), w1, edge_key(s, b1))) {
            b1 = j;
            w1 = w;
        }
    }
    t.extra[0] = TreeEdge{s, b0, w0};
    t.extra[1] = TreeEdge{s, b1, w1};

    t.degree.assign(n, 0);
    for (int v = 0; v < n; ++v) {
        if (t.parent[v] >= 0) {
            ++t.degree[v];
            ++t.degree[t.parent[v]];
        }
    }
    for (const TreeEdge& e : t.extra) {
        ++t.degree[e.a];
        ++t.degree[e.b];
    }

    t.length = mst.length + w0 + w1;
    double pi_sum = 0.0;
    for (double v : pi) pi_sum += v;
    t.lower_bound = t.length - 2.0 * pi_sum;
    return t;
}

double AlphaTable::at(int i, int j) const {
    if (!sparse()) return a[static_cast<std::size_t>(i) * n + j];
    if (i == j) return 0.0;
    for (const auto& [to, val] : rows[i])
        if (to == j) return val;
    return kInf;
}

AlphaTable alpha_values(const Instance& inst, const OneTree& t) {
    const int n = inst.n();
    const int s = t.special;
    const Pi& pi = t.pi;

    // adjacency of the spanning tree over V \ {special}
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (int v = 0; v < n; ++v) {
        const int p = t.parent[v];
        if (p < 0) continue;
        const double w = dist_pi(inst, pi, v, p);
        adj[v].push_back({p, w});
        adj[p].push_back({v, w});
    }

    AlphaTable tab;
    tab.n = n;
    const bool dense = n <= AlphaTable::kDenseMaxN;
    if (dense) tab.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    else tab.rows.assign(n, {});

    auto second_extra_alpha = [&](int j) {
        if (j == t.extra[0].b || j == t.extra[1].b) return 0.0;
        return dist_pi(inst, pi, s, j) - t.extra[1].w;
    };

    // beta(i,j) = heaviest edge on the i-j tree path, one DFS per row
    std::vector<double> beta(n, 0.0);
    std::vector<int> stack;
    std::vector<double> row(n, 0.0);
    std::vector<char> seen(n, 0);
    for (int i = 0; i < n; ++i) {
        if (i == s) {
            if (dense) {
                double* out = tab.a.data() + static_cast<std::size_t>(i) * n;
                for (int j = 0; j < n; ++j) out[j] = (j == s) ? 0.0 : second_extra_alpha(j);
            }
            continue;
        }
        beta[i] = -kInf;
        stack.assign(1, i);
        seen.assign(n, 0);
        seen[i] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (const auto& [u, w] : adj[v]) {
                if (seen[u]) continue;
                seen[u] = 1;
                beta[u] = std::max(beta[v], w);
                stack.push_back(u);
            }
        }
        for (int j = 0; j < n; ++j) {
            if (j == i) row[j] = 0.0;
            else if (j == s) row[j] = second_extra_alpha(i);
            else row[j] = dist_pi(inst, pi, i, j) - beta[j];
        }
        if (dense) {
            std::copy(row.begin(), row.end(),
                      tab.a.data() + static_cast<std::size_t>(i) * n);
        } else {
            std::vector<std::pair<int, double>> top;
            top.reserve(n - 1);
            for (int j = 0; j < n; ++j)
                if (j != i) top.push_back({j, row[j]});
            const std::size_t k =
                std::min<std::size_t>(AlphaTable::kSparseK, top.size());
            auto by_alpha = [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second < b.second;
                return a.first < b.first;
            };
            std::partial_sort(top.begin(), top.begin() + k, top.end(), by_alpha);
            top.resize(k);
            tab.rows[i] = std::move(top);
        }
    }
    if (!dense) {
        // sparse special row from the closed-form rule
        std::vector<std::pair<int, double>> top;
        top.reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != s) top.push_back({j, second_extra_alpha(j)});
        const std::size_t k = std::min<std::size_t>(AlphaTable::kSparseK, top.size());
        auto by_alpha = [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second < b.second;
            return a.first < b.first;
        };
        std::partial_sort(top.begin(), top.begin() + k, top.end(), by_alpha);
        top.resize(k);
        tab.rows[s] = std::move(top);
    }
    return tab;
}

SubgradientResult subgradient_ascent(const Instance& inst, int max_stale) {
    const int n = inst.n();
    if (n < 4) throw std::invalid_argument("subgradient ascent needs n >= 4");
    if (max_stale <= 0) max_stale = 10 * n;

    Pi pi(n, 0.0);
    const int special = default_special(inst, pi);
    OneTree cur = minimum_one_tree(inst, pi, special);

    SubgradientResult res;
    res.pi = pi;
    res.best_bound = cur.lower_bound;
    res.tree = cur;
    res.iterations = 0;

    auto is_tour = [](const OneTree& t) {
        for (int d : t.degree)
            if (d != 2) return false;
        return true;
    };
    if (is_tour(cur)) return res;

    // fractional-coordinate instances need a step on the scale of the tree
    double step = metric_is_integral(inst.metric())
                      ? 1.0
                      : cur.length / (2.0 * n * n);
    int period = n / 2;
    int stale = 0;

    while (period >= 1 && step >= 1e-7 && stale < max_stale) {
        bool all_improved = true;
        for (int it = 0; it < period; ++it) {
            for (int v = 0; v < n; ++v) pi[v] += step * (cur.degree[v] - 2);
            cur = minimum_one_tree(inst, pi, special);
            ++res.iterations;
            if (cur.lower_bound > res.best_bound) {
                res.best_bound = cur.lower_bound;
                res.pi = pi;
                res.tree = cur;
                stale = 0;
            } else {
                ++stale;
                all_improved = false;
            }
            if (is_tour(cur)) return res;
            if (stale >= max_stale) return res;
        }
        if (all_improved) step *= 2.0;
        period /= 2;
    }
    return res;
}

std::string one_tree_edge_list(const Instance& inst, const OneTree& t) {
    std::string out;
    char buf[96];
    for (int v = 0; v < static_cast<int>(t.parent.size()); ++v) {
        if (t.parent[v] < 0) continue;
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", v, t.parent[v],
                      dist_pi(inst, t.pi, v, t.parent[v]));
        out += buf;
    }
    for (const TreeEdge& e : t.extra) {
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", e.a, e.b, e.w);
        out += buf;
    }
    return out;
}

} // namespace lktsp
