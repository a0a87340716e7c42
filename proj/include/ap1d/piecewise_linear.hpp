#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "interval.hpp"

namespace ap1d {

// Continuous piecewise linear function given by breakpoints; constant
// extension outside [x.front(), x.back()].
struct PiecewiseLinearFn {
    std::vector<double> x;  // strictly ascending, size >= 2
    std::vector<double> y;
};

inline void validate(const PiecewiseLinearFn& u) {
    if (u.x.size() < 2 || u.x.size() != u.y.size())
        throw std::invalid_argument("plf: need matching x/y with at least two breakpoints");
    for (size_t i = 1; i < u.x.size(); ++i)
        if (!(u.x[i - 1] < u.x[i])) throw std::invalid_argument("plf: breakpoints must be ascending");
}

inline double plf_value(const PiecewiseLinearFn& u, double t) {
    if (t <= u.x.front()) return u.y.front();
    if (t >= u.x.back()) return u.y.back();
    size_t hi = static_cast<size_t>(std::upper_bound(u.x.begin(), u.x.end(), t) - u.x.begin());
    size_t lo = hi - 1;
    double s = (u.y[hi] - u.y[lo]) / (u.x[hi] - u.x[lo]);
    return u.y[lo] + s * (t - u.x[lo]);
}

// Deterministic random test function on I: interior breakpoints uniform in I,
// values uniform in [-1, 1]. Same seed, same function.
inline PiecewiseLinearFn make_random_plf(const Interval& I, int interior_points, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(I.a, I.b);
    std::uniform_real_distribution<double> uy(-1.0, 1.0);
    std::vector<double> xs{I.a, I.b};
    double min_gap = length(I) * 1e-6;
    for (int i = 0; i < interior_points; ++i) xs.push_back(ux(rng));
    std::sort(xs.begin(), xs.end());
    std::vector<double> keep;
    for (double v : xs)
        if (keep.empty() || v - keep.back() >= min_gap) keep.push_back(v);
    if (keep.back() != I.b) keep.push_back(I.b);
    PiecewiseLinearFn u;
    u.x = std::move(keep);
    for (size_t i = 0; i < u.x.size(); ++i) u.y.push_back(uy(rng));
    validate(u);
    return u;
}

} // namespace ap1d
