#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lktsp/instance.hpp"

namespace lktsp {

// node weights; adjusted distance is d(i,j) + (pi[i] + pi[j]), the pair sum
// grouped first so the value is bitwise symmetric in i and j
using Pi = std::vector<double>;

inline double dist_pi(const Instance& inst, const Pi& pi, int i, int j) {
    return inst.dist(i, j) + (pi[i] + pi[j]);
}

struct MstResult {
    std::vector<int> parent;  // -1 for the root and for an excluded city
    double length = 0.0;
};

// Prim over all cities except `exclude` under the pi-adjusted metric.
// Ties resolved by the lexicographic order (weight, edge_key), which makes
// the tree unique.
MstResult minimum_spanning_tree(const Instance& inst, const Pi& pi,
                                std::optional<int> exclude = std::nullopt);

struct TreeEdge {
    int a = -1, b = -1;
    double w = 0.0;
};

struct OneTree {
    std::vector<int> parent;             // spanning-tree parents; special gets -1
    int special = -1;
    std::array<TreeEdge, 2> extra{};     // special's two cheapest edges, ascending
    std::vector<int> degree;
    double length = 0.0;                 // under d_pi
    double lower_bound = 0.0;            // length - 2*sum(pi)
    Pi pi;                               // the weights this tree was built under

    bool has_tree_edge(int i, int j) const;  // includes the two extras
};

// special picked as the city whose second-nearest neighbor (under d_pi) is
// farthest; ties go to the lowest index
int default_special(const Instance& inst, const Pi& pi);

OneTree minimum_one_tree(const Instance& inst, const Pi& pi,
                         std::optional<int> special = std::nullopt);

struct AlphaTable {
    // full n*n matrix up to kDenseMaxN cities; per-node top-kSparseK lists
    // (sorted by alpha, then index) above that
    static constexpr int kDenseMaxN = 4096;
    static constexpr int kSparseK = 32;

    int n = 0;
    std::vector<double> a;  // row-major; empty in sparse mode
    std::vector<std::vector<std::pair<int, double>>> rows;  // sparse mode only

    bool sparse() const { return a.empty(); }
    double at(int i, int j) const;  // +inf for pairs absent from a sparse row
};

// alpha(i,j) = cost of forcing edge (i,j) into the 1-tree, in d_pi space
AlphaTable alpha_values(const Instance& inst, const OneTree& t);

struct SubgradientResult {
    Pi pi;
    double best_bound = 0.0;
    OneTree tree;  // the 1-tree at the best pi
    int iterations = 0;
};

// degree-driven ascent; max_stale = 0 means the default of 10*n
SubgradientResult subgradient_ascent(const Instance& inst, int max_stale = 0);

// debug dump: one "i j weight" line per edge, tree edges then the two extras
std::string one_tree_edge_list(const Instance& inst, const OneTree& t);

} // namespace lktsp
