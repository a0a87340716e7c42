#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

namespace ap1d {

// Open interval (a,b) with a < b. Endpoints never carry mass in this library,
// so the open/closed distinction only matters next to atoms and poles.
struct Interval {
    double a = 0.0;
    double b = 0.0;
};

inline bool operator==(const Interval& x, const Interval& y) { return x.a == y.a && x.b == y.b; }

inline double length(const Interval& I) { return I.b - I.a; }
inline double center(const Interval& I) { return 0.5 * (I.a + I.b); }
inline double radius(const Interval& I) { return 0.5 * (I.b - I.a); }

inline bool valid(const Interval& I) {
    return std::isfinite(I.a) && std::isfinite(I.b) && I.a < I.b;
}

inline bool contains(const Interval& I, double x) { return I.a < x && x < I.b; }

// J inside I, closure-tolerant: shared endpoints count as inside.
inline bool contains(const Interval& I, const Interval& J) { return I.a <= J.a && J.b <= I.b; }

inline std::optional<Interval> intersect(const Interval& I, const Interval& J) {
    double a = std::max(I.a, J.a);
    double b = std::min(I.b, J.b);
    if (a < b) return Interval{a, b};
    return std::nullopt;
}

// Concentric rescale: same center, radius scaled by t.
inline Interval scaled(const Interval& I, double t) {
    double c = center(I);
    double r = radius(I) * t;
    return {c - r, c + r};
}

inline Interval doubled(const Interval& I) { return scaled(I, 2.0); }
inline Interval half(const Interval& I) { return scaled(I, 0.5); }

} // namespace ap1d
