#pragma once

#include "lktsp/candidates.hpp"
#include "lktsp/instance.hpp"

namespace lktsp {

struct PopmusicParams {
    double sample_fraction = 0.1;  // skeleton size = min(n, max(3, ceil(fraction*n)))
    int r = 12;                    // sub-path window length
    int rebuild_rounds = 50;       // cap on sliding-window passes (fixpoint may stop earlier)
    int runs_for_candidates = 10;
};

int popmusic_sample_size(int n, const PopmusicParams& p);

// skeleton 2-opt/3-opt tour over a random sample, cheapest insertion of the
// rest ordered by distance-to-tour, r-window path re-optimization
Tour popmusic_tour(const Instance& inst, std::uint64_t seed, const PopmusicParams& p);

// union of runs_for_candidates tours seeded seed, seed+1, ...
CandidateSet popmusic_candidates(const Instance& inst, std::uint64_t seed,
                                 const PopmusicParams& p);

} // namespace lktsp
