#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "lktsp/instance.hpp"
#include "lktsp/onetree.hpp"

namespace lktsp {

enum class Generator { NEAREST, ALPHA, TWO_OPT_UNION, POPMUSIC, FILE };

const char* generator_name(Generator g);

struct Candidate {
    int to = -1;
    double score = 0.0;
};

struct CandidateSet {
    Generator tag = Generator::NEAREST;
    bool symmetric = false;
    std::vector<std::vector<Candidate>> lists;

    int n() const { return static_cast<int>(lists.size()); }
    bool contains(int i, int j) const;             // j in i's list
    bool contains_undirected(int i, int j) const;  // either direction
};

// per-city k nearest by (distance, index)
CandidateSet nearest_candidates(const Instance& inst, int k);

// per-city k smallest alpha by (alpha, index); seed-independent
CandidateSet alpha_candidates(const Instance& inst, int k, bool use_subgradient);

// unique edges of the given tours, per-city lists ordered by descending
// frequency (ties: ascending distance, then index); always symmetric
CandidateSet union_from_tours(const Instance& inst, const std::vector<Tour>& tours,
                              std::optional<int> max_per_city = std::nullopt);

// m two-opt descents from random tours seeded seed, seed+1, ...
CandidateSet two_opt_union(const Instance& inst, int m, std::uint64_t seed);

struct MissingEdges {
    int count = 0;
    std::vector<std::pair<int, int>> edges;
};

MissingEdges missing_optimal_edges(const CandidateSet& cand, const Tour& optimal);

// candidate file layout: first line n, one line per city
// `id dad count c1 s1 c2 s2 ...` (1-based), terminated by -1.
// alpha_like_scores: write rounded scores; otherwise zeros.
std::string write_candidate_file(const CandidateSet& cand, bool alpha_like_scores);
CandidateSet parse_candidate_file(std::istream& in);

// mean 1-based rank of each tour edge within both endpoints' full
// alpha-ordered neighbor lists; 1.5 is the floor
double mean_optimal_alpha_rank(const AlphaTable& table, const Tour& optimal);

int unique_edge_count(const CandidateSet& cand);

} // namespace lktsp
