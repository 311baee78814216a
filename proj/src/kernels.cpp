#include "lktsp/kernels.hpp"

namespace lktsp {

namespace {

bool cpu_has_avx2() {
#if defined(LKTSP_BUILD_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* forced = nullptr;

const KernelTable* detect() {
#ifdef LKTSP_BUILD_AVX2
    if (cpu_has_avx2()) return &kernels_avx2;
#endif
    return &kernels_scalar;
}

} // namespace

const char* lane_name(Lane lane) {
    return lane == Lane::AVX2 ? "avx2" : "scalar";
}

const KernelTable& kernels() {
    if (forced) return *forced;
    static const KernelTable* active = detect();
    return *active;
}

Lane active_lane() { return kernels().lane; }

bool lane_available(Lane lane) {
    if (lane == Lane::SCALAR) return true;
#ifdef LKTSP_BUILD_AVX2
    return cpu_has_avx2();
#else
    return false;
#endif
}

void force_lane(Lane lane) {
#ifdef LKTSP_BUILD_AVX2
    forced = (lane == Lane::AVX2) ? &kernels_avx2 : &kernels_scalar;
#else
    (void)lane;
    forced = &kernels_scalar;
#endif
}

void clear_forced_lane() { forced = nullptr; }

} // namespace lktsp
