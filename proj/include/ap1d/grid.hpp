#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "interval.hpp"

namespace ap1d {

// Uniform endpoint grids with dyadic refinement. Level l has
// (n_points - 1)*2^l + 1 points, so every level's points are a subset of the
// next level's and supremum scans over grid intervals are monotone in l.
struct GridSpec {
    int n_points = 257;
    int refine_levels = 3;
    std::optional<double> max_interval_length;  // filter for interval families
    double tolerance = 1e-3;                    // relative change declaring convergence
};

inline void validate(const GridSpec& g) {
    if (g.n_points < 3) throw std::invalid_argument("grid: need at least 3 points");
    if (g.refine_levels < 0 || g.refine_levels > 12) throw std::invalid_argument("grid: refine levels out of range");
    if (g.max_interval_length && !(*g.max_interval_length > 0.0))
        throw std::invalid_argument("grid: max interval length must be positive");
    if (!(g.tolerance > 0.0)) throw std::invalid_argument("grid: tolerance must be positive");
}

inline int level_points(const GridSpec& g, int level) {
    return ((g.n_points - 1) << level) + 1;
}

inline std::vector<double> grid_points(const Interval& window, const GridSpec& g, int level) {
    int n = level_points(g, level);
    std::vector<double> xs(static_cast<size_t>(n));
    double h = length(window) / (n - 1);
    for (int i = 0; i < n; ++i) xs[static_cast<size_t>(i)] = window.a + i * h;
    xs.front() = window.a;
    xs.back() = window.b;
    return xs;
}

// Interval length filter with a relative slack so grid arithmetic noise never
// drops the intended family member.
inline bool within_max_length(const GridSpec& g, double len) {
    if (!g.max_interval_length) return true;
    return len <= *g.max_interval_length * (1.0 + 1e-12);
}

} // namespace ap1d
