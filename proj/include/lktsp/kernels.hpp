#pragma once

#include <cmath>
#include <cstdint>

#include "lktsp/types.hpp"

namespace lktsp {

// Distance kernels exist in a scalar reference lane and an AVX2 lane selected
// at runtime. The contract is bit-exact agreement: both lanes perform the
// identical sequence of IEEE operations per element (sub, mul, add, sqrt,
// floor/ceil, all correctly rounded; no FMA), so lane choice can never change
// an observable result.

enum class Lane { SCALAR, AVX2 };

const char* lane_name(Lane lane);

// single-pair distance, shared by both lanes for loop tails
inline double point_dist(double ax, double ay, double bx, double by, Metric m) {
    double dx = ax - bx;
    double dy = ay - by;
    double t1 = dx * dx;
    double t2 = dy * dy;
    double d = std::sqrt(t1 + t2);
    switch (m) {
        case Metric::EUC_2D_ROUNDED: return std::floor(d + 0.5);
        case Metric::CEIL_2D: return std::ceil(d);
        case Metric::EUC_2D_EXACT: return d;
    }
    return d;
}

struct KernelTable {
    // out[j-n0] = dist((cx,cy), city j) for j in [n0, n1)
    void (*dist_range)(const double* xs, const double* ys, int n0, int n1,
                       double cx, double cy, Metric m, double* out);
    // out[j-n0] = dist((cx,cy), city j) + (pi[j] + pi_i)
    void (*dist_range_pi)(const double* xs, const double* ys, int n0, int n1,
                          double cx, double cy, Metric m,
                          const double* pi, double pi_i, double* out);
    // out[j] = row[j] + (pi[j] + pi_i), j in [0, n)
    void (*add_pi_row)(const double* row, const double* pi, double pi_i,
                       int n, double* out);
    Lane lane;
};

extern const KernelTable kernels_scalar;
#ifdef LKTSP_BUILD_AVX2
extern const KernelTable kernels_avx2;
#endif

// active table: AVX2 when the CPU supports it, unless overridden
const KernelTable& kernels();
Lane active_lane();
bool lane_available(Lane lane);
void force_lane(Lane lane);  // test hook
void clear_forced_lane();

} // namespace lktsp
