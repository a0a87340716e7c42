#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "weight.hpp"

namespace ap1d {

struct Atom {
    double location = 0.0;
    double mass = 0.0;  // > 0
};

// Absolutely continuous part (the density) plus finitely many atoms. Atoms
// exist to exercise the negative paths: a measure with an atom is never
// doubling on windows around it. For a periodic density the atom pattern
// repeats with the same period; the stored list describes one period.
struct MeasureModel {
    Weight density;
    std::vector<Atom> atoms;
};

inline MeasureModel as_measure(Weight w) { return {std::move(w), {}}; }

inline bool atom_free(const MeasureModel& m) { return m.atoms.empty(); }

inline void validate(const MeasureModel& m) {
    validate(m.density);
    for (const Atom& a : m.atoms)
        if (!(a.mass > 0.0) || !std::isfinite(a.mass) || !std::isfinite(a.location))
            throw std::invalid_argument("measure: atoms need finite location and positive mass");
}

namespace detail {

// Total mass of atoms strictly inside I, with periodic repetition when the
// density is periodic. Atoms exactly on an endpoint do not count.
inline double atom_mass(const MeasureModel& m, const Interval& I) {
    double total = 0.0;
    if (!m.density.periodic) {
        for (const Atom& a : m.atoms)
            if (I.a < a.location && a.location < I.b) total += a.mass;
        return total;
    }
    double L = m.density.period();
    for (const Atom& a : m.atoms) {
        // count integers k with I.a < a.location + k*L < I.b
        double k_lo = std::floor((I.a - a.location) / L) + 1.0;
        double k_hi = std::ceil((I.b - a.location) / L) - 1.0;
        if (I.a == a.location + k_lo * L) k_lo += 1.0;  // endpoint excluded
        if (I.b == a.location + k_hi * L) k_hi -= 1.0;
        if (k_hi >= k_lo) total += a.mass * (k_hi - k_lo + 1.0);
    }
    return total;
}

inline double atom_moment(const MeasureModel& m, const Interval& I) {
    double total = 0.0;
    if (!m.density.periodic) {
        for (const Atom& a : m.atoms)
            if (I.a < a.location && a.location < I.b) total += a.mass * a.location;
        return total;
    }
    double L = m.density.period();
    for (const Atom& a : m.atoms) {
        double k_lo = std::floor((I.a - a.location) / L) + 1.0;
        double k_hi = std::ceil((I.b - a.location) / L) - 1.0;
        if (I.a == a.location + k_lo * L) k_lo += 1.0;
        if (I.b == a.location + k_hi * L) k_hi -= 1.0;
        for (double k = k_lo; k <= k_hi; k += 1.0) total += a.mass * (a.location + k * L);
    }
    return total;
}

} // namespace detail

inline double measure(const MeasureModel& m, const Interval& I) {
    if (!(I.a < I.b)) return 0.0;
    return integrate(m.density, I) + detail::atom_mass(m, I);
}

// Integral of x dmu over I; finite whenever the measure is.
inline double measure_moment(const MeasureModel& m, const Interval& I) {
    if (!(I.a < I.b)) return 0.0;
    return weight_moment(m.density, I) + detail::atom_moment(m, I);
}

// Even reflection about 0 and M of the restriction to (0, M), extended with
// period 2M. Atoms at interior points split into the pair {x, 2M-x}; atoms
// sitting exactly on 0 or M double in place, matching the boundary behavior
// of the underlying even extension. Atoms outside [0, M] are dropped.
inline MeasureModel reflect_even(const MeasureModel& m, double M) {
    MeasureModel r;
    r.density = reflect_periodic(m.density, M);
    for (const Atom& a : m.atoms) {
        if (a.location < 0.0 || a.location > M) continue;
        if (a.location == 0.0 || a.location == M) {
            r.atoms.push_back({a.location, 2.0 * a.mass});
        } else {
            r.atoms.push_back({a.location, a.mass});
            r.atoms.push_back({2.0 * M - a.location, a.mass});
        }
    }
    return r;
}

} // namespace ap1d
