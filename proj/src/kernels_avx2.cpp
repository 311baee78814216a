#include "lktsp/kernels.hpp"

#ifdef LKTSP_BUILD_AVX2

#include <immintrin.h>

namespace lktsp {

namespace {

// 4-wide metric finish: d = sqrt(t1 + t2), then the metric's rounding.
// _mm256_sqrt_pd / add / mul / sub / floor / ceil are all correctly rounded,
// matching the scalar ops in point_dist exactly.
inline __m256d metric_finish(__m256d dx, __m256d dy, Metric m) {
    __m256d t1 = _mm256_mul_pd(dx, dx);
    __m256d t2 = _mm256_mul_pd(dy, dy);
    __m256d d = _mm256_sqrt_pd(_mm256_add_pd(t1, t2));
    switch (m) {
        case Metric::EUC_2D_ROUNDED:
            return _mm256_floor_pd(_mm256_add_pd(d, _mm256_set1_pd(0.5)));
        case Metric::CEIL_2D:
            return _mm256_ceil_pd(d);
        case Metric::EUC_2D_EXACT:
            return d;
    }
    return d;
}

void dist_range_v(const double* xs, const double* ys, int n0, int n1,
                  double cx, double cy, Metric m, double* out) {
    const __m256d vcx = _mm256_set1_pd(cx);
    const __m256d vcy = _mm256_set1_pd(cy);
    int j = n0;
    for (; j + 4 <= n1; j += 4) {
        __m256d dx = _mm256_sub_pd(vcx, _mm256_loadu_pd(xs + j));
        __m256d dy = _mm256_sub_pd(vcy, _mm256_loadu_pd(ys + j));
        _mm256_storeu_pd(out + (j - n0), metric_finish(dx, dy, m));
    }
    for (; j < n1; ++j) {
        out[j - n0] = point_dist(cx, cy, xs[j], ys[j], m);
    }
}

void dist_range_pi_v(const double* xs, const double* ys, int n0, int n1,
                     double cx, double cy, Metric m,
                     const double* pi, double pi_i, double* out) {
    const __m256d vcx = _mm256_set1_pd(cx);
    const __m256d vcy = _mm256_set1_pd(cy);
    const __m256d vpi = _mm256_set1_pd(pi_i);
    int j = n0;
    for (; j + 4 <= n1; j += 4) {
        __m256d dx = _mm256_sub_pd(vcx, _mm256_loadu_pd(xs + j));
        __m256d dy = _mm256_sub_pd(vcy, _mm256_loadu_pd(ys + j));
        __m256d d = metric_finish(dx, dy, m);
        __m256d ps = _mm256_add_pd(_mm256_loadu_pd(pi + j), vpi);
        _mm256_storeu_pd(out + (j - n0), _mm256_add_pd(d, ps));
    }
    for (; j < n1; ++j) {
        out[j - n0] = point_dist(cx, cy, xs[j], ys[j], m) + (pi[j] + pi_i);
    }
}

void add_pi_row_v(const double* row, const double* pi, double pi_i,
                  int n, double* out) {
    const __m256d vpi = _mm256_set1_pd(pi_i);
    int j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d ps = _mm256_add_pd(_mm256_loadu_pd(pi + j), vpi);
        _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_loadu_pd(row + j), ps));
    }
    for (; j < n; ++j) {
        out[j] = row[j] + (pi[j] + pi_i);
    }
}

} // namespace

const KernelTable kernels_avx2 = {dist_range_v, dist_range_pi_v, add_pi_row_v, Lane::AVX2};

} // namespace lktsp

#endif // LKTSP_BUILD_AVX2
