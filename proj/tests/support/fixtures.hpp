#pragma once

#include <cmath>
#include <vector>

#include "lktsp/instance.hpp"

namespace fixtures {

// Five-point instance: A(0,0) B(0,0.9) C(0.1,1.1) D(0.7,0) E(-0.7,0),
// exact Euclidean metric. Indices: A=0 B=1 C=2 D=3 E=4.
inline lktsp::Instance five_point() {
    return lktsp::make_instance(
        "five-point", lktsp::Metric::EUC_2D_EXACT,
        {0.0, 0.0, 0.1, 0.7, -0.7},
        {0.0, 0.9, 1.1, 0.0, 0.0});
}

constexpr int A = 0, B = 1, C = 2, D = 3, E = 4;

// pairwise exact distances (independent arithmetic: hand-computed radicals)
constexpr double D_AB = 0.9;                       // |(0,0)-(0,0.9)|
constexpr double D_AD = 0.7;
constexpr double D_AE = 0.7;
constexpr double D_DE = 1.4;
inline double d_ac() { return std::sqrt(1.22); }   // (0.1)^2 + (1.1)^2
inline double d_bc() { return std::sqrt(0.05); }   // (0.1)^2 + (0.2)^2
inline double d_bd() { return std::sqrt(1.30); }   // (0.7)^2 + (0.9)^2
inline double d_be() { return std::sqrt(1.30); }
inline double d_cd() { return std::sqrt(1.57); }   // (0.6)^2 + (1.1)^2
inline double d_ce() { return std::sqrt(1.85); }   // (0.8)^2 + (1.1)^2

// optimal cycle A-D-C-B-E and its length 0.7 + sqrt(1.57) + sqrt(0.05) + sqrt(1.3) + 0.7
inline std::vector<int> optimal_order() { return {A, D, C, B, E}; }
inline double optimal_length() { return D_AD + d_cd() + d_bc() + d_be() + D_AE; }

// the initial tour highlighted in the five-point example: A-D-B-C-E
inline std::vector<int> start_order() { return {A, D, B, C, E}; }
inline double start_length() { return D_AD + d_bd() + d_bc() + d_ce() + D_AE; }

// spanning-tree length over all five points: edges AD, AE, AB, BC
inline double mst_length() { return D_AD + D_AE + D_AB + d_bc(); }

// one-tree lengths at pi = 0 (tree over the rest + the special node's two
// cheapest edges), derived by enumerating spanning trees by hand
inline double one_tree_len_special_c() { return D_AD + D_AE + D_AB + d_bc() + d_ac(); }
inline double one_tree_len_special_d() { return D_AE + D_AB + d_bc() + D_AD + d_bd(); }

// unit square, exact metric
inline lktsp::Instance unit_square() {
    return lktsp::make_instance(
        "unit-square", lktsp::Metric::EUC_2D_EXACT,
        {0.0, 1.0, 1.0, 0.0},
        {0.0, 0.0, 1.0, 1.0});
}

} // namespace fixtures
