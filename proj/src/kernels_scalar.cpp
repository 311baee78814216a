#include "lktsp/kernels.hpp"

namespace lktsp {

namespace {

void dist_range_s(const double* xs, const double* ys, int n0, int n1,
                  double cx, double cy, Metric m, double* out) {
    for (int j = n0; j < n1; ++j) {
        out[j - n0] = point_dist(cx, cy, xs[j], ys[j], m);
    }
}

void dist_range_pi_s(const double* xs, const double* ys, int n0, int n1,
                     double cx, double cy, Metric m,
                     const double* pi, double pi_i, double* out) {
    for (int j = n0; j < n1; ++j) {
        out[j - n0] = point_dist(cx, cy, xs[j], ys[j], m) + (pi[j] + pi_i);
    }
}

void add_pi_row_s(const double* row, const double* pi, double pi_i,
                  int n, double* out) {
    for (int j = 0; j < n; ++j) {
        out[j] = row[j] + (pi[j] + pi_i);
    }
}

} // namespace

const KernelTable kernels_scalar = {dist_range_s, dist_range_pi_s, add_pi_row_s, Lane::SCALAR};

} // namespace lktsp
