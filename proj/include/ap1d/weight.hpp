#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "interval.hpp"
#include "primitive.hpp"

namespace ap1d {

struct Piece {
    Interval iv;
    std::vector<PrimitiveTerm> terms;  // nonempty; a formal sum when size > 1
};

// Piecewise closed-form density. Pieces are sorted and tile the hull exactly
// (shared endpoints are the same double). A periodic weight repeats the hull
// pattern over all of R with period equal to the hull length; its pieces
// describe exactly one period.
struct Weight {
    std::vector<Piece> pieces;
    bool periodic = false;

    Interval hull() const { return {pieces.front().iv.a, pieces.back().iv.b}; }
    double period() const { return length(hull()); }
    // nullopt means all of R.
    std::optional<Interval> support() const {
        if (periodic) return std::nullopt;
        return hull();
    }
};

inline void validate(const Weight& w) {
    if (w.pieces.empty()) throw std::invalid_argument("weight: no pieces");
    for (size_t i = 0; i < w.pieces.size(); ++i) {
        const Piece& p = w.pieces[i];
        if (!valid(p.iv)) throw std::invalid_argument("weight: piece interval must be finite with a < b");
        if (p.terms.empty()) throw std::invalid_argument("weight: piece with no terms");
        for (const PrimitiveTerm& t : p.terms)
            if (!(t.coefficient > 0.0) || !std::isfinite(t.coefficient) ||
                !std::isfinite(t.center) || !std::isfinite(t.exponent))
                throw std::invalid_argument("weight: term parameters must be finite, coefficient positive");
        if (i > 0 && w.pieces[i - 1].iv.b != p.iv.a)
            throw std::invalid_argument("weight: pieces must tile an interval without gaps");
    }
}

inline Weight make_weight(std::vector<Piece> pieces, bool periodic = false) {
    Weight w{std::move(pieces), periodic};
    validate(w);
    return w;
}

inline Weight constant_weight(double c, Interval iv) {
    return make_weight({{iv, {PrimitiveTerm{TermKind::constant, c, 0.0, 0.0}}}});
}

inline Weight power_weight(double alpha, Interval iv, double c = 1.0, double center = 0.0) {
    return make_weight({{iv, {PrimitiveTerm{TermKind::power, c, center, alpha}}}});
}

inline Weight exp_weight(double beta, Interval iv, double c = 1.0) {
    return make_weight({{iv, {PrimitiveTerm{TermKind::exponential, c, 0.0, beta}}}});
}

inline bool support_contains(const Weight& w, const Interval& I) {
    auto s = w.support();
    return !s || contains(*s, I);
}

namespace detail {

// Fold x into [a0, a0 + L) by whole-period shifts.
inline double fold_point(double x, double a0, double L) {
    double y = x - L * std::floor((x - a0) / L);
    if (y < a0) y += L;
    if (y >= a0 + L) y -= L;
    return y;
}

inline double simpson_rule(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double m, double b,
                                   double fa, double fm, double fb, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double L = simpson_rule(a, m, fa, flm, fm);
    double R = simpson_rule(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(L + R - whole) <= 15.0 * tol)
        return L + R + (L + R - whole) / 15.0;
    return adaptive_simpson_rec(f, a, lm, m, fa, flm, fm, L, 0.5 * tol, depth - 1)
         + adaptive_simpson_rec(f, m, rm, b, fm, frm, fb, R, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-11, int depth = 32) {
    if (!(a < b)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = simpson_rule(a, b, fa, fm, fb);
    double tol = rel_tol * std::max(std::abs(whole), 1e-300);
    return adaptive_simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, depth);
}

// Order of growth of a term sum at the point e: negative when some term has a
// pole there, the smallest positive exponent when every term vanishes there,
// and 0 when the sum is positive and finite.
inline double sum_local_order(const std::vector<PrimitiveTerm>& terms, double e) {
    bool pole = false;
    double neg_min = 0.0, pos_min = kInf;
    bool all_vanish = true;
    for (const PrimitiveTerm& t : terms) {
        if (t.kind == TermKind::power && t.center == e) {
            if (t.exponent < 0.0) { pole = true; neg_min = std::min(neg_min, t.exponent); }
            else if (t.exponent > 0.0) pos_min = std::min(pos_min, t.exponent);
            else all_vanish = false;
        } else {
            all_vanish = false;
        }
    }
    if (pole) return neg_min;
    if (all_vanish) return pos_min;
    return 0.0;
}

// Combined coefficient of the order-defining terms at e.
inline double sum_order_coefficient(const std::vector<PrimitiveTerm>& terms, double e, double order) {
    double c = 0.0;
    for (const PrimitiveTerm& t : terms)
        if (t.kind == TermKind::power && t.center == e && t.exponent == order) c += t.coefficient;
    return c;
}

// Integral of (sum of terms)^s over (a,b) when no closed form exists.
// Divergence is decided analytically: near a point where the sum behaves like
// C|x-e|^g, the integrand behaves like C^s|x-e|^{gs}, divergent iff gs <= -1.
// Integrable endpoint singularities get geometric slabs plus the analytic
// dominant tail; everything smooth goes to adaptive Simpson.
inline double sum_pow_integral(const std::vector<PrimitiveTerm>& terms, double s, double a, double b) {
    std::vector<double> cuts{a, b};
    for (const PrimitiveTerm& t : terms)
        if (t.kind == TermKind::power && a < t.center && t.center < b) cuts.push_back(t.center);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto f = [&](double x) {
        double v = 0.0;
        for (const PrimitiveTerm& t : terms) v += term_value(t, x);
        return std::pow(v, s);
    };

    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double l = cuts[i], h = cuts[i + 1];
        double gl = sum_local_order(terms, l) * s;
        double gh = sum_local_order(terms, h) * s;
        if (gl <= -1.0 || gh <= -1.0) return kInf;

        // Peel an endpoint with f -> inf: slabs shrinking geometrically toward
        // e until the analytic tail of the dominant power is negligible.
        auto peel = [&](double e, double g, double inward) -> double {
            double order = g / s;
            double C = std::pow(sum_order_coefficient(terms, e, order), s);
            double d = 0.25 * (h - l);
            double acc = 0.0;
            for (int k = 0; k < 60; ++k) {
                double hi = d * std::pow(0.5, k), lo = 0.5 * hi;
                double x1 = e + inward * lo, x2 = e + inward * hi;
                acc += adaptive_simpson(f, std::min(x1, x2), std::max(x1, x2), 1e-10, 24);
                double tail = C * std::pow(lo, 1.0 + g) / (1.0 + g);
                if (tail <= 1e-13 * std::max(acc, 1e-300)) return acc;
                if (k == 59) return acc + tail;
            }
            return acc;
        };

        double lo = l, hi = h;
        if (gl < 0.0) { total += peel(l, gl, +1.0); lo = l + 0.25 * (h - l); }
        if (gh < 0.0) { total += peel(h, gh, -1.0); hi = h - 0.25 * (h - l); }
        if (lo < hi) total += adaptive_simpson(f, lo, hi, 1e-11, 32);
        if (std::isinf(total)) return kInf;
    }
    return total;
}

inline double piece_pow_integral(const Piece& p, double s, double a, double b) {
    if (!(a < b)) return 0.0;
    if (p.terms.size() == 1) return term_pow_integral(p.terms[0], s, a, b);
    if (s == 0.0) return b - a;
    if (s == 1.0) {
        double total = 0.0;
        for (const PrimitiveTerm& t : p.terms) total += term_integral(t, a, b);
        return total;
    }
    return sum_pow_integral(p.terms, s, a, b);
}

// (a,b) must lie within the hull.
inline double base_pow_integral(const Weight& w, double s, double a, double b) {
    double total = 0.0;
    for (const Piece& p : w.pieces) {
        if (p.iv.b <= a) continue;
        if (p.iv.a >= b) break;
        total += piece_pow_integral(p, s, std::max(a, p.iv.a), std::min(b, p.iv.b));
        if (std::isinf(total)) return kInf;
    }
    return total;
}

inline double piece_moment(const Piece& p, double a, double b) {
    double total = 0.0;
    for (const PrimitiveTerm& t : p.terms) total += term_moment(t, a, b);
    return total;
}

inline double base_moment(const Weight& w, double a, double b) {
    double total = 0.0;
    for (const Piece& p : w.pieces) {
        if (p.iv.b <= a) continue;
        if (p.iv.a >= b) break;
        total += piece_moment(p, std::max(a, p.iv.a), std::min(b, p.iv.b));
    }
    return total;
}

} // namespace detail

// Integral of w^s over I. Outside the support w is 0 (never integrated);
// non-integrable poles give +inf. Exact except on sum pieces with s not in
// {0, 1}, which use the quadrature in sum_pow_integral.
inline double integrate_power(const Weight& w, double s, const Interval& I) {
    if (!(I.a < I.b)) return 0.0;
    if (!w.periodic) {
        Interval h = w.hull();
        double a = std::max(I.a, h.a), b = std::min(I.b, h.b);
        if (!(a < b)) return 0.0;
        return detail::base_pow_integral(w, s, a, b);
    }
    double L = w.period();
    double a0 = w.hull().a;
    double total = 0.0;
    double full = std::floor((I.b - I.a) / L);
    if (full >= 1.0) {
        double per = detail::base_pow_integral(w, s, a0, a0 + L);
        if (std::isinf(per)) return kInf;
        total += full * per;
    }
    double rem_start = I.a + full * L;
    double rem = I.b - rem_start;
    if (rem > 0.0) {
        double c = detail::fold_point(rem_start, a0, L);
        double d = c + rem;
        if (d <= a0 + L) {
            total += detail::base_pow_integral(w, s, c, d);
        } else {
            total += detail::base_pow_integral(w, s, c, a0 + L);
            total += detail::base_pow_integral(w, s, a0, d - L);
        }
    }
    return total;
}

inline double integrate(const Weight& w, const Interval& I) { return integrate_power(w, 1.0, I); }

// Integral of x*w(x) over I; periodic parts shift as moment + shift*mass.
inline double weight_moment(const Weight& w, const Interval& I) {
    if (!(I.a < I.b)) return 0.0;
    if (!w.periodic) {
        Interval h = w.hull();
        double a = std::max(I.a, h.a), b = std::min(I.b, h.b);
        if (!(a < b)) return 0.0;
        return detail::base_moment(w, a, b);
    }
    double L = w.period();
    double a0 = w.hull().a;
    double total = 0.0;
    double x = I.a;
    while (x < I.b) {
        double k = std::floor((x - a0) / L);
        double shift = k * L;
        double seg_end = std::min(I.b, a0 + (k + 1.0) * L);
        if (!(seg_end > x)) break;
        double u1 = x - shift, u2 = seg_end - shift;
        total += detail::base_moment(w, u1, u2) + shift * detail::base_pow_integral(w, 1.0, u1, u2);
        x = seg_end;
    }
    return total;
}

namespace detail {

// y within the hull closure; shared endpoints resolve to the right piece.
inline const Piece& piece_at(const Weight& w, double y) {
    size_t lo = 0, hi = w.pieces.size() - 1;
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (y < w.pieces[mid].iv.b) hi = mid; else lo = mid + 1;
    }
    return w.pieces[lo];
}

inline double piece_value(const Piece& p, double y) {
    double v = 0.0;
    for (const PrimitiveTerm& t : p.terms) v += term_value(t, y);
    return v;
}

} // namespace detail

// Pointwise value. Strictly outside the support: 0. At the support boundary
// and at interior piece joints the limit from the right piece wins; poles
// evaluate to +inf, zeros of positive order to 0.
inline double eval(const Weight& w, double x) {
    double y = x;
    if (w.periodic) {
        y = detail::fold_point(y, w.hull().a, w.period());
    } else {
        Interval h = w.hull();
        if (y < h.a || y > h.b) return 0.0;
    }
    return detail::piece_value(detail::piece_at(w, y), y);
}

// Minimum of the one-sided limits at x; differs from eval only at piece
// joints where the density jumps. Support boundaries keep the inside limit.
inline double eval_min_onesided(const Weight& w, double x) {
    double y = x;
    double a0 = w.hull().a, L = w.period();
    if (w.periodic) {
        y = detail::fold_point(y, a0, L);
    } else {
        Interval h = w.hull();
        if (y < h.a || y > h.b) return 0.0;
    }
    double v = detail::piece_value(detail::piece_at(w, y), y);
    for (const Piece& p : w.pieces)
        if (p.iv.b == y) v = std::min(v, detail::piece_value(p, y));
    if (w.periodic && y == a0)
        v = std::min(v, detail::piece_value(w.pieces.back(), a0 + L));
    return v;
}

namespace detail {

inline double term_closure_min(const PrimitiveTerm& t, double l, double h) {
    switch (t.kind) {
        case TermKind::constant: return t.coefficient;
        case TermKind::power: {
            if (t.exponent == 0.0) return t.coefficient;
            if (l <= t.center && t.center <= h && t.exponent > 0.0) return 0.0;
            return std::min(term_value(t, l), term_value(t, h));
        }
        case TermKind::exponential: return std::min(term_value(t, l), term_value(t, h));
    }
    return 0.0;
}

inline double sum_derivative(const std::vector<PrimitiveTerm>& terms, double x) {
    double d = 0.0;
    for (const PrimitiveTerm& t : terms) {
        switch (t.kind) {
            case TermKind::constant: break;
            case TermKind::power: {
                double u = x - t.center;
                if (u != 0.0)
                    d += t.coefficient * t.exponent * (u > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(u), t.exponent - 1.0);
                break;
            }
            case TermKind::exponential:
                d += t.coefficient * t.exponent * std::exp(t.exponent * x);
                break;
        }
    }
    return d;
}

// Minimum of a term sum over the closure of (l,h). Single terms are exact;
// sums split at power centers and locate interior critical points by
// derivative sign scanning plus bisection.
inline double sum_closure_min(const std::vector<PrimitiveTerm>& terms, double l, double h) {
    if (terms.size() == 1) return term_closure_min(terms[0], l, h);
    std::vector<double> cuts{l, h};
    for (const PrimitiveTerm& t : terms)
        if (t.kind == TermKind::power && l < t.center && t.center < h) cuts.push_back(t.center);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto value = [&](double x) {
        double v = 0.0;
        for (const PrimitiveTerm& t : terms) v += term_value(t, x);
        return v;
    };

    double best = kInf;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double x1 = cuts[i], x2 = cuts[i + 1];
        best = std::min({best, value(x1), value(x2)});
        const int n = 48;
        double step = (x2 - x1) / (n + 1);
        double prev_x = x1 + step;
        double prev_d = sum_derivative(terms, prev_x);
        best = std::min(best, value(prev_x));
        for (int j = 2; j <= n; ++j) {
            double x = x1 + j * step;
            double d = sum_derivative(terms, x);
            best = std::min(best, value(x));
            if (prev_d < 0.0 && d >= 0.0) {
                double lo = prev_x, hi = x;
                for (int it = 0; it < 80; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (sum_derivative(terms, mid) < 0.0) lo = mid; else hi = mid;
                }
                best = std::min(best, value(0.5 * (lo + hi)));
            }
            prev_x = x;
            prev_d = d;
        }
    }
    return best;
}

inline double base_essinf(const Weight& w, double a, double b) {
    double best = kInf;
    for (const Piece& p : w.pieces) {
        if (p.iv.b <= a) continue;
        if (p.iv.a >= b) break;
        best = std::min(best, sum_closure_min(p.terms, std::max(a, p.iv.a), std::min(b, p.iv.b)));
    }
    return best;
}

} // namespace detail

// Essential infimum of w over I; 0 when I sticks out of the support.
inline double essinf(const Weight& w, const Interval& I) {
    if (!(I.a < I.b)) throw std::invalid_argument("essinf: degenerate interval");
    if (!w.periodic) {
        Interval h = w.hull();
        if (I.a < h.a || I.b > h.b) return 0.0;
        return detail::base_essinf(w, I.a, I.b);
    }
    double L = w.period();
    double a0 = w.hull().a;
    if (I.b - I.a >= L) return detail::base_essinf(w, a0, a0 + L);
    double c = detail::fold_point(I.a, a0, L);
    double d = c + (I.b - I.a);
    if (d <= a0 + L) return detail::base_essinf(w, c, d);
    return std::min(detail::base_essinf(w, c, a0 + L), detail::base_essinf(w, a0, d - L));
}

// Pointwise power w^{1/(1-p)}, the dual density for exponent p > 1.
inline Weight conjugate(const Weight& w, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("conjugate: requires p > 1");
    double s = 1.0 / (1.0 - p);
    Weight r = w;
    for (Piece& piece : r.pieces) {
        if (piece.terms.size() != 1)
            throw std::invalid_argument("conjugate: sum pieces have no closed-form power");
        piece.terms[0] = term_pow(piece.terms[0], s);
    }
    return r;
}

enum class LatticeOp { sum, max, min };

namespace detail {

// Solutions of t1(x) == t2(x) strictly inside (l,h). Closed forms where the
// kinds admit them, sampling plus bisection otherwise.
inline std::vector<double> term_crossings(const PrimitiveTerm& t1, const PrimitiveTerm& t2,
                                          double l, double h) {
    std::vector<double> roots;
    auto push = [&](double x) { if (l < x && x < h) roots.push_back(x); };
    auto power_const = [&](const PrimitiveTerm& pw, double c) {
        if (pw.exponent == 0.0) return;
        double d = std::pow(c / pw.coefficient, 1.0 / pw.exponent);
        push(pw.center - d);
        push(pw.center + d);
    };

    bool generic = false;
    if (t1.kind == TermKind::constant && t2.kind == TermKind::constant) {
        // parallel
    } else if (t1.kind == TermKind::power && t2.kind == TermKind::constant) {
        power_const(t1, t2.coefficient);
    } else if (t1.kind == TermKind::constant && t2.kind == TermKind::power) {
        power_const(t2, t1.coefficient);
    } else if (t1.kind == TermKind::power && t2.kind == TermKind::power) {
        if (t1.center == t2.center) {
            if (t1.exponent != t2.exponent) {
                double d = std::pow(t2.coefficient / t1.coefficient, 1.0 / (t1.exponent - t2.exponent));
                push(t1.center - d);
                push(t1.center + d);
            }
        } else {
            generic = true;
        }
    } else if (t1.kind == TermKind::exponential && t2.kind == TermKind::exponential) {
        if (t1.exponent != t2.exponent)
            push(std::log(t2.coefficient / t1.coefficient) / (t1.exponent - t2.exponent));
    } else if (t1.kind == TermKind::exponential && t2.kind == TermKind::constant) {
        push(std::log(t2.coefficient / t1.coefficient) / t1.exponent);
    } else if (t1.kind == TermKind::constant && t2.kind == TermKind::exponential) {
        push(std::log(t1.coefficient / t2.coefficient) / t2.exponent);
    } else {
        generic = true;
    }

    if (generic) {
        auto g = [&](double x) { return term_value(t1, x) - term_value(t2, x); };
        const int n = 512;
        double step = (h - l) / n;
        double px = l + 0.5 * step;
        double pg = g(px);
        for (int j = 1; j < n; ++j) {
            double x = l + (j + 0.5) * step;
            double gx = g(x);
            if ((pg < 0.0 && gx > 0.0) || (pg > 0.0 && gx < 0.0)) {
                double lo = px, hi = x;
                for (int it = 0; it < 80; ++it) {
                    double mid = 0.5 * (lo + hi);
                    double gm = g(mid);
                    if ((gm < 0.0) == (pg < 0.0)) lo = mid; else hi = mid;
                }
                push(0.5 * (lo + hi));
            }
            px = x;
            pg = gx;
        }
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

inline bool same_terms(const std::vector<PrimitiveTerm>& a, const std::vector<PrimitiveTerm>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

} // namespace detail

// Pointwise sum / max / min on the overlap of the supports. Sum merges like
// terms; max and min resolve single-term pieces exactly at their crossing
// points. Max/min of sum pieces is only defined when both sides agree.
inline Weight lattice(const Weight& w1, const Weight& w2, LatticeOp op) {
    if (w1.periodic || w2.periodic)
        throw std::invalid_argument("lattice: periodic inputs not supported");
    auto ov = intersect(w1.hull(), w2.hull());
    if (!ov) throw std::invalid_argument("lattice: supports do not overlap");

    std::vector<double> bps{ov->a, ov->b};
    for (const Weight* w : {&w1, &w2})
        for (const Piece& p : w->pieces) {
            if (ov->a < p.iv.a && p.iv.a < ov->b) bps.push_back(p.iv.a);
            if (ov->a < p.iv.b && p.iv.b < ov->b) bps.push_back(p.iv.b);
        }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    std::vector<Piece> out;
    auto emit = [&](Interval iv, std::vector<PrimitiveTerm> terms) {
        if (!out.empty() && out.back().iv.b == iv.a && detail::same_terms(out.back().terms, terms)) {
            out.back().iv.b = iv.b;
            return;
        }
        out.push_back({iv, std::move(terms)});
    };

    for (size_t i = 0; i + 1 < bps.size(); ++i) {
        double l = bps[i], h = bps[i + 1];
        double mid = 0.5 * (l + h);
        const Piece& p1 = detail::piece_at(w1, mid);
        const Piece& p2 = detail::piece_at(w2, mid);
        if (op == LatticeOp::sum) {
            std::vector<PrimitiveTerm> terms = p1.terms;
            for (const PrimitiveTerm& t : p2.terms) {
                bool merged = false;
                for (PrimitiveTerm& u : terms) {
                    bool like = u.kind == t.kind && u.exponent == t.exponent &&
                                (u.kind != TermKind::power || u.center == t.center);
                    if (like) { u.coefficient += t.coefficient; merged = true; break; }
                }
                if (!merged) terms.push_back(t);
            }
            emit({l, h}, std::move(terms));
            continue;
        }
        if (detail::same_terms(p1.terms, p2.terms)) {
            emit({l, h}, p1.terms);
            continue;
        }
        if (p1.terms.size() != 1 || p2.terms.size() != 1)
            throw std::invalid_argument("lattice: max/min of sum pieces has no closed form");
        std::vector<double> cuts = detail::term_crossings(p1.terms[0], p2.terms[0], l, h);
        cuts.insert(cuts.begin(), l);
        cuts.push_back(h);
        for (size_t j = 0; j + 1 < cuts.size(); ++j) {
            double x = 0.5 * (cuts[j] + cuts[j + 1]);
            double v1 = term_value(p1.terms[0], x), v2 = term_value(p2.terms[0], x);
            bool take1 = (op == LatticeOp::max) ? (v1 >= v2) : (v1 <= v2);
            emit({cuts[j], cuts[j + 1]}, take1 ? p1.terms : p2.terms);
        }
    }
    return make_weight(std::move(out));
}

inline Weight lattice_sum(const Weight& w1, const Weight& w2) { return lattice(w1, w2, LatticeOp::sum); }
inline Weight lattice_max(const Weight& w1, const Weight& w2) { return lattice(w1, w2, LatticeOp::max); }
inline Weight lattice_min(const Weight& w1, const Weight& w2) { return lattice(w1, w2, LatticeOp::min); }

// Restrict w to (0, M), reflect evenly about M, and extend with period 2M.
// The result is even about 0 and about M and agrees with w on (0, M).
inline Weight reflect_periodic(const Weight& w, double M) {
    if (!(M > 0.0) || !std::isfinite(M)) throw std::invalid_argument("reflect: M must be positive");
    if (w.periodic) throw std::invalid_argument("reflect: input is already periodic");
    if (!support_contains(w, Interval{0.0, M}))
        throw std::invalid_argument("reflect: support must cover (0, M)");

    std::vector<Piece> base;
    for (const Piece& p : w.pieces) {
        double l = std::max(p.iv.a, 0.0), h = std::min(p.iv.b, M);
        if (l < h) base.push_back({{l, h}, p.terms});
    }
    std::vector<Piece> out = base;
    for (size_t i = base.size(); i-- > 0;) {
        const Piece& p = base[i];
        Piece q;
        q.iv = {2.0 * M - p.iv.b, 2.0 * M - p.iv.a};
        for (const PrimitiveTerm& t : p.terms) q.terms.push_back(term_mirror(t, M));
        out.push_back(std::move(q));
    }
    Weight r{std::move(out), true};
    validate(r);
    return r;
}

namespace detail {

// {x in (l,h) : sum of terms < c} for one piece part, as sorted intervals.
inline std::vector<Interval> piece_sublevel(const std::vector<PrimitiveTerm>& terms,
                                            double l, double h, double c) {
    std::vector<Interval> out;
    auto clip_push = [&](double a, double b) {
        a = std::max(a, l);
        b = std::min(b, h);
        if (a < b) out.push_back({a, b});
    };
    if (terms.size() == 1) {
        const PrimitiveTerm& t = terms[0];
        switch (t.kind) {
            case TermKind::constant:
                if (t.coefficient < c) clip_push(l, h);
                return out;
            case TermKind::power: {
                if (t.exponent == 0.0) {
                    if (t.coefficient < c) clip_push(l, h);
                    return out;
                }
                double d = std::pow(c / t.coefficient, 1.0 / t.exponent);
                if (t.exponent > 0.0) {
                    clip_push(t.center - d, t.center + d);
                } else {
                    clip_push(l, t.center - d);
                    clip_push(t.center + d, h);
                }
                return out;
            }
            case TermKind::exponential: {
                double x0 = std::log(c / t.coefficient) / t.exponent;
                if (t.exponent > 0.0) clip_push(l, x0); else clip_push(x0, h);
                return out;
            }
        }
    }
    // sums: scan sign changes of w - c and bisect the boundaries
    auto value = [&](double x) {
        double v = 0.0;
        for (const PrimitiveTerm& t : terms) v += term_value(t, x);
        return v;
    };
    const int n = 1024;
    double step = (h - l) / n;
    double start = kInf;  // open start of a sublevel run, inf = none
    double px = l + 1e-9 * step;
    bool pin = value(px) < c;
    if (pin) start = l;
    for (int j = 1; j <= n; ++j) {
        double x = (j == n) ? h - 1e-9 * step : l + j * step;
        bool in = value(x) < c;
        if (in != pin) {
            double lo = px, hi = x;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                if ((value(mid) < c) == pin) lo = mid; else hi = mid;
            }
            double boundary = 0.5 * (lo + hi);
            if (pin) clip_push(start, boundary);
            else start = boundary;
            pin = in;
        }
        px = x;
    }
    if (pin) clip_push(start, h);
    return out;
}

inline std::vector<Interval> base_sublevel(const Weight& w, double a, double b, double c) {
    std::vector<Interval> out;
    for (const Piece& p : w.pieces) {
        if (p.iv.b <= a) continue;
        if (p.iv.a >= b) break;
        auto part = piece_sublevel(p.terms, std::max(a, p.iv.a), std::min(b, p.iv.b), c);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

} // namespace detail

// {x in I : w(x) < c} as a sorted union of intervals; exact on single-term
// pieces. Periodic weights are unfolded segment by segment.
inline std::vector<Interval> sublevel_set(const Weight& w, const Interval& I, double c) {
    std::vector<Interval> out;
    auto append = [&](std::vector<Interval> part, double shift) {
        for (Interval& iv : part) out.push_back({iv.a + shift, iv.b + shift});
    };
    if (!w.periodic) {
        Interval h = w.hull();
        double a = std::max(I.a, h.a), b = std::min(I.b, h.b);
        if (a < b) append(detail::base_sublevel(w, a, b, c), 0.0);
    } else {
        double L = w.period();
        double a0 = w.hull().a;
        double x = I.a;
        while (x < I.b) {
            double k = std::floor((x - a0) / L);
            double shift = k * L;
            double seg_end = std::min(I.b, a0 + (k + 1.0) * L);
            if (!(seg_end > x)) break;
            append(detail::base_sublevel(w, x - shift, seg_end - shift, c), shift);
            x = seg_end;
        }
    }
    // merge touching runs
    std::vector<Interval> merged;
    for (const Interval& iv : out) {
        if (!merged.empty() && iv.a <= merged.back().b + 1e-12 * std::max(1.0, std::abs(merged.back().b)))
            merged.back().b = std::max(merged.back().b, iv.b);
        else
            merged.push_back(iv);
    }
    return merged;
}

} // namespace ap1d
