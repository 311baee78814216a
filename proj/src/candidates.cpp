#include "lktsp/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "lktsp/localsearch.hpp"

namespace lktsp {

const char* generator_name(Generator g) {
    switch (g) {
        case Generator::NEAREST: return "nearest";
        case Generator::ALPHA: return "alpha";
        case Generator::TWO_OPT_UNION: return "two-opt-union";
        case Generator::POPMUSIC: return "popmusic";
        case Generator::FILE: return "file";
    }
    return "?";
}

bool CandidateSet::contains(int i, int j) const {
    for (const Candidate& c : lists[i])
        if (c.to == j) return true;
    return false;
}

bool CandidateSet::contains_undirected(int i, int j) const {
    return contains(i, j) || contains(j, i);
}

CandidateSet nearest_candidates(const Instance& inst, int k) {
    const int n = inst.n();
    if (k < 1 || k >= n) throw std::invalid_argument("k must be in [1, n-1]");
    CandidateSet set;
    set.tag = Generator::NEAREST;
    set.symmetric = false;
    set.lists.assign(n, {});
    std::vector<Candidate> row;
    for (int i = 0; i < n; ++i) {
        row.clear();
        for (int j = 0; j < n; ++j)
            if (j != i) row.push_back({j, inst.dist(i, j)});
        std::partial_sort(row.begin(), row.begin() + k, row.end(),
                          [](const Candidate& a, const Candidate& b) {
                              if (a.score != b.score) return a.score < b.score;
                              return a.to < b.to;
                          });
        set.lists[i].assign(row.begin(), row.begin() + k);
    }
    return set;
}

CandidateSet alpha_candidates(const Instance& inst, int k, bool use_subgradient) {
    const int n = inst.n();
    if (k < 1 || k >= n) throw std::invalid_argument("k must be in [1, n-1]");
    if (n > AlphaTable::kDenseMaxN && k > AlphaTable::kSparseK)
        throw std::invalid_argument("k exceeds the sparse alpha row capacity");

    OneTree tree;
    if (use_subgradient) {
        tree = subgradient_ascent(inst).tree;
    } else {
        Pi zero(n, 0.0);
        tree = minimum_one_tree(inst, zero);
    }
    AlphaTable tab = alpha_values(inst, tree);

    CandidateSet set;
    set.tag = Generator::ALPHA;
    set.symmetric = false;
    set.lists.assign(n, {});
    if (tab.sparse()) {
        for (int i = 0; i < n; ++i)
            for (int r = 0; r < k; ++r)
                set.lists[i].push_back({tab.rows[i][r].first, tab.rows[i][r].second});
        return set;
    }
    std::vector<Candidate> row;
    for (int i = 0; i < n; ++i) {
        row.clear();
        for (int j = 0; j < n; ++j)
            if (j != i) row.push_back({j, tab.at(i, j)});
        std::partial_sort(row.begin(), row.begin() + k, row.end(),
                          [](const Candidate& a, const Candidate& b) {
                              if (a.score != b.score) return a.score < b.score;
                              return a.to < b.to;
                          });
        set.lists[i].assign(row.begin(), row.begin() + k);
    }
    return set;
}

CandidateSet union_from_tours(const Instance& inst, const std::vector<Tour>& tours,
                              std::optional<int> max_per_city) {
    const int n = inst.n();
    if (tours.empty()) throw std::invalid_argument("need at least one tour");
    for (const Tour& t : tours)
        if (static_cast<int>(t.order.size()) != n)
            throw std::invalid_argument("tour size mismatch");
    if (max_per_city && *max_per_city < 1)
        throw std::invalid_argument("max_per_city must be positive");

    std::unordered_map<EdgeKey, int> freq;
    for (const Tour& t : tours)
        for (int k = 0; k < n; ++k)
            ++freq[edge_key(t.order[k], t.order[(k + 1) % n])];

    CandidateSet set;
    set.tag = Generator::TWO_OPT_UNION;
    set.symmetric = true;
    set.lists.assign(n, {});
    for (const auto& [key, count] : freq) {
        const int i = static_cast<int>(edge_lo(key));
        const int j = static_cast<int>(edge_hi(key));
        set.lists[i].push_back({j, static_cast<double>(count)});
        set.lists[j].push_back({i, static_cast<double>(count)});
    }

    auto order_list = [&](int i) {
        std::sort(set.lists[i].begin(), set.lists[i].end(),
                  [&](const Candidate& a, const Candidate& b) {
                      if (a.score != b.score) return a.score > b.score;  // frequency desc
                      const double da = inst.dist(i, a.to), db = inst.dist(i, b.to);
                      if (da != db) return da < db;
                      return a.to < b.to;
                  });
    };
    for (int i = 0; i < n; ++i) order_list(i);

    if (max_per_city) {
        for (int i = 0; i < n; ++i)
            if (static_cast<int>(set.lists[i].size()) > *max_per_city)
                set.lists[i].resize(*max_per_city);
        // restore symmetry, even where that overflows the cap
        for (int i = 0; i < n; ++i)
            for (const Candidate& c : set.lists[i])
                if (!set.contains(c.to, i))
                    set.lists[c.to].push_back({i, c.score});
        for (int i = 0; i < n; ++i) order_list(i);
    }
    return set;
}

CandidateSet two_opt_union(const Instance& inst, int m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("need at least one tour");
    std::vector<Tour> tours;
    tours.reserve(m);
    for (int t = 0; t < m; ++t) {
        Rng rng(seed + static_cast<std::uint64_t>(t));
        SearchState st(inst, random_tour(inst.n(), rng), rng);
        two_opt_descent(inst, st, nullptr);
        tours.push_back({st.order, st.length});
    }
    return union_from_tours(inst, tours);
}

MissingEdges missing_optimal_edges(const CandidateSet& cand, const Tour& optimal) {
    const int n = cand.n();
    if (static_cast<int>(optimal.order.size()) != n)
        throw std::invalid_argument("tour size mismatch");
    MissingEdges out;
    for (int k = 0; k < n; ++k) {
        const int i = optimal.order[k];
        const int j = optimal.order[(k + 1) % n];
        if (!cand.contains_undirected(i, j)) {
            ++out.count;
            out.edges.push_back({std::min(i, j), std::max(i, j)});
        }
    }
    return out;
}

std::string write_candidate_file(const CandidateSet& cand, bool alpha_like_scores) {
    std::string out = std::to_string(cand.n()) + "\n";
    char buf[64];
    for (int i = 0; i < cand.n(); ++i) {
        out += std::to_string(i + 1);
        out += " 0 ";
        out += std::to_string(cand.lists[i].size());
        for (const Candidate& c : cand.lists[i]) {
            const long long score =
                alpha_like_scores ? std::llround(c.score) : 0LL;
            std::snprintf(buf, sizeof buf, " %d %lld", c.to + 1, score);
            out += buf;
        }
        out += "\n";
    }
    out += "-1\n";
    return out;
}

CandidateSet parse_candidate_file(std::istream& in) {
    std::string line;
    int line_no = 0;
    auto next_line = [&]() {
        if (!std::getline(in, line)) throw ParseError(line_no + 1, "unexpected end of file");
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };

    next_line();
    int n = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> n) || n < 3) throw ParseError(line_no, "bad city count");
        std::string rest;
        if (ss >> rest) throw ParseError(line_no, "trailing tokens after city count");
    }

    CandidateSet set;
    set.tag = Generator::FILE;
    set.lists.assign(n, {});
    std::vector<char> seen(n, 0);
    for (int row = 0; row < n; ++row) {
        next_line();
        std::istringstream ss(line);
        int id = 0, dad = 0, count = 0;
        if (!(ss >> id >> dad >> count)) throw ParseError(line_no, "malformed candidate row");
        if (id < 1 || id > n) throw ParseError(line_no, "city id out of range");
        if (seen[id - 1]) throw ParseError(line_no, "duplicate city id");
        seen[id - 1] = 1;
        if (count < 0) throw ParseError(line_no, "negative candidate count");
        for (int c = 0; c < count; ++c) {
            int to = 0;
            double score = 0.0;
            if (!(ss >> to >> score))
                throw ParseError(line_no, "fewer candidates than the declared count");
            if (to < 1 || to > n) throw ParseError(line_no, "candidate id out of range");
            if (to == id) throw ParseError(line_no, "self-loop candidate");
            set.lists[id - 1].push_back({to - 1, score});
        }
        std::string rest;
        if (ss >> rest) throw ParseError(line_no, "more candidates than the declared count");
    }
    next_line();
    {
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok) || tok != "-1")
            throw ParseError(line_no, "missing -1 terminator");
    }

    set.symmetric = true;
    for (int i = 0; i < n && set.symmetric; ++i)
        for (const Candidate& c : set.lists[i])
            if (!set.contains(c.to, i)) {
                set.symmetric = false;
                break;
            }
    return set;
}

double mean_optimal_alpha_rank(const AlphaTable& table, const Tour& optimal) {
    const int n = table.n;
    if (static_cast<int>(optimal.order.size()) != n)
        throw std::invalid_argument("tour size mismatch");
    if (table.sparse())
        throw std::invalid_argument("rank statistics need the dense alpha table");

    double rank_sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const int i = optimal.order[k];
        for (int nb = 0; nb < 2; ++nb) {
            const int j = nb == 0 ? optimal.order[(k + 1) % n]
                                  : optimal.order[(k + n - 1) % n];
            // 1-based position of j among i's neighbors ordered by (alpha, index)
            const double aj = table.at(i, j);
            int rank = 1;
            for (int t = 0; t < n; ++t) {
                if (t == i || t == j) continue;
                const double at = table.at(i, t);
                if (at < aj || (at == aj && t < j)) ++rank;
            }
            rank_sum += rank;
        }
    }
    return rank_sum / (2.0 * n);
}

int unique_edge_count(const CandidateSet& cand) {
    std::unordered_set<EdgeKey> keys;
    for (int i = 0; i < cand.n(); ++i)
        for (const Candidate& c : cand.lists[i]) keys.insert(edge_key(i, c.to));
    return static_cast<int>(keys.size());
}

} // namespace lktsp
