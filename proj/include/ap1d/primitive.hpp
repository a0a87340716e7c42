#pragma once

#include <cmath>
#include <limits>

#include "interval.hpp"

namespace ap1d {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class TermKind { constant, power, exponential };

// One closed-form factor of a weight density:
//   constant      c
//   power         c*|x - center|^exponent
//   exponential   c*exp(exponent*x)
// coefficient > 0 always. A piece of a weight is a sum of one or more terms;
// the family is closed under pointwise powers, reflections and translations,
// which is what keeps every integral below exact.
struct PrimitiveTerm {
    TermKind kind = TermKind::constant;
    double coefficient = 1.0;
    double center = 0.0;    // power only
    double exponent = 0.0;  // power: alpha, exponential: beta
};

inline bool operator==(const PrimitiveTerm& s, const PrimitiveTerm& t) {
    if (s.kind != t.kind || s.coefficient != t.coefficient) return false;
    switch (s.kind) {
        case TermKind::constant: return true;
        case TermKind::power: return s.center == t.center && s.exponent == t.exponent;
        case TermKind::exponential: return s.exponent == t.exponent;
    }
    return false;
}

// Pointwise value; a pole evaluates to +inf, a zero of positive order to 0.
inline double term_value(const PrimitiveTerm& t, double x) {
    switch (t.kind) {
        case TermKind::constant: return t.coefficient;
        case TermKind::power: {
            double u = std::abs(x - t.center);
            if (u == 0.0) {
                if (t.exponent > 0.0) return 0.0;
                if (t.exponent < 0.0) return kInf;
                return t.coefficient;
            }
            return t.coefficient * std::pow(u, t.exponent);
        }
        case TermKind::exponential: return t.coefficient * std::exp(t.exponent * x);
    }
    return 0.0;
}

// t(x)^s as a term of the same kind; s may be negative.
inline PrimitiveTerm term_pow(const PrimitiveTerm& t, double s) {
    PrimitiveTerm r = t;
    r.coefficient = std::pow(t.coefficient, s);
    r.exponent = t.exponent * s;
    return r;
}

// Reflection x -> 2q - x about the point q.
inline PrimitiveTerm term_mirror(const PrimitiveTerm& t, double q) {
    PrimitiveTerm r = t;
    switch (t.kind) {
        case TermKind::constant: break;
        case TermKind::power: r.center = 2.0 * q - t.center; break;
        case TermKind::exponential:
            // c*exp(b*(2q - x)) = (c*exp(2qb))*exp(-b*x)
            r.coefficient = t.coefficient * std::exp(2.0 * q * t.exponent);
            r.exponent = -t.exponent;
            break;
    }
    return r;
}

namespace detail {

// Integral of u^g over 0 <= l < h; +inf exactly when l == 0 and g <= -1.
inline double pow_integral_one_side(double g, double l, double h) {
    if (!(l < h)) return 0.0;
    if (l == 0.0) {
        if (g <= -1.0) return kInf;
        return std::pow(h, g + 1.0) / (g + 1.0);
    }
    if (g == -1.0) return std::log(h / l);
    return (std::pow(h, g + 1.0) - std::pow(l, g + 1.0)) / (g + 1.0);
}

// Integral of |u|^g over (u1, u2), splitting at 0 when straddled.
inline double abs_pow_integral(double g, double u1, double u2) {
    if (u1 >= 0.0) return pow_integral_one_side(g, u1, u2);
    if (u2 <= 0.0) return pow_integral_one_side(g, -u2, -u1);
    return pow_integral_one_side(g, 0.0, -u1) + pow_integral_one_side(g, 0.0, u2);
}

// Integral of u*|u|^g over (u1, u2), signed.
inline double abs_pow_moment(double g, double u1, double u2) {
    if (u1 >= 0.0) return pow_integral_one_side(g + 1.0, u1, u2);
    if (u2 <= 0.0) return -pow_integral_one_side(g + 1.0, -u2, -u1);
    return pow_integral_one_side(g + 1.0, 0.0, u2) - pow_integral_one_side(g + 1.0, 0.0, -u1);
}

} // namespace detail

// Integral of t(x)^s over (a,b), exact; +inf for a non-integrable pole in the
// closure (power with exponent*s <= -1 whose center touches [a,b]).
inline double term_pow_integral(const PrimitiveTerm& t, double s, double a, double b) {
    if (!(a < b)) return 0.0;
    double K = std::pow(t.coefficient, s);
    switch (t.kind) {
        case TermKind::constant: return K * (b - a);
        case TermKind::power:
            return K * detail::abs_pow_integral(t.exponent * s, a - t.center, b - t.center);
        case TermKind::exponential: {
            double r = s * t.exponent;
            if (r == 0.0) return K * (b - a);
            // (exp(r*b) - exp(r*a))/r, evaluated from the larger exponent out
            // so nearby endpoints do not cancel.
            double hi = std::max(r * a, r * b);
            double lo = std::min(r * a, r * b);
            return K * std::exp(hi) * (-std::expm1(lo - hi)) / std::abs(r);
        }
    }
    return 0.0;
}

inline double term_integral(const PrimitiveTerm& t, double a, double b) {
    return term_pow_integral(t, 1.0, a, b);
}

// Integral of x*t(x) over (a,b); finite whenever the plain integral is.
inline double term_moment(const PrimitiveTerm& t, double a, double b) {
    if (!(a < b)) return 0.0;
    switch (t.kind) {
        case TermKind::constant: return 0.5 * t.coefficient * (b - a) * (b + a);
        case TermKind::power: {
            double u1 = a - t.center, u2 = b - t.center;
            double m = detail::abs_pow_moment(t.exponent, u1, u2);
            double z = detail::abs_pow_integral(t.exponent, u1, u2);
            return t.coefficient * (m + t.center * z);
        }
        case TermKind::exponential: {
            double beta = t.exponent;
            if (beta == 0.0) return 0.5 * t.coefficient * (b - a) * (b + a);
            auto F = [&](double x) { return std::exp(beta * x) * (x / beta - 1.0 / (beta * beta)); };
            return t.coefficient * (F(b) - F(a));
        }
    }
    return 0.0;
}

} // namespace ap1d
