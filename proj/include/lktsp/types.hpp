#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lktsp {

// EUC_2D_ROUNDED is TSPLIB EUC_2D (nearest-integer rounding), CEIL_2D is the
// TSPLIB ceiling variant, EUC_2D_EXACT keeps the unrounded value.
enum class Metric { EUC_2D_ROUNDED, EUC_2D_EXACT, CEIL_2D };

inline const char* metric_name(Metric m) {
    switch (m) {
        case Metric::EUC_2D_ROUNDED: return "EUC_2D";
        case Metric::EUC_2D_EXACT: return "EUC_2D_EXACT";
        case Metric::CEIL_2D: return "CEIL_2D";
    }
    return "?";
}

inline std::optional<Metric> metric_from_name(const std::string& s) {
    if (s == "EUC_2D") return Metric::EUC_2D_ROUNDED;
    if (s == "EUC_2D_EXACT") return Metric::EUC_2D_EXACT;
    if (s == "CEIL_2D") return Metric::CEIL_2D;
    return std::nullopt;
}

inline bool metric_is_integral(Metric m) { return m != Metric::EUC_2D_EXACT; }

// Undirected edge packed as a single key: min index in the high half.
using EdgeKey = std::uint64_t;

inline EdgeKey edge_key(int i, int j) {
    std::uint64_t a = static_cast<std::uint32_t>(i < j ? i : j);
    std::uint64_t b = static_cast<std::uint32_t>(i < j ? j : i);
    return (a << 32) | b;
}

inline int edge_lo(EdgeKey k) { return static_cast<int>(k >> 32); }
inline int edge_hi(EdgeKey k) { return static_cast<int>(k & 0xffffffffu); }

struct Tour {
    std::vector<int> order;
    double length = 0.0;
};

} // namespace lktsp
