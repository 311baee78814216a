#pragma once

#include "lktsp/instance.hpp"

namespace lktsp {

struct ExactResult {
    Tour tour;
    double length = 0.0;
    bool limit_respected = false;
};

// bitmask dynamic program, n <= 15
ExactResult held_karp_dp(const Instance& inst);

// full enumeration with direction dedup, n <= 10
ExactResult brute_force(const Instance& inst);

} // namespace lktsp
