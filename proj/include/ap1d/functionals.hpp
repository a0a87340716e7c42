#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "measure.hpp"
#include "piecewise_linear.hpp"
#include "report.hpp"

namespace ap1d {

// Muckenhoupt functional of w on one interval, exact:
//   p > 1:  (avg of w) * (avg of w^{1/(1-p)})^{p-1}
//   p = 1:  (avg of w) / essinf
// +inf when a factor diverges; also +inf when I pokes out of the support
// (w = 0 on a set of positive length makes the dual factor blow up).
inline double ap_functional(const Weight& w, double p, const Interval& I) {
    if (!(p >= 1.0)) throw std::invalid_argument("ap: requires p >= 1");
    if (!valid(I)) throw std::invalid_argument("ap: interval needs finite a < b");
    if (!support_contains(w, I)) return kInf;
    double len = length(I);
    double A = integrate(w, I);
    if (std::isinf(A)) return kInf;
    if (p == 1.0) {
        double mv = essinf(w, I);
        if (!(mv > 0.0)) return kInf;
        return (A / len) / mv;
    }
    double B = integrate_power(w, 1.0 / (1.0 - p), I);
    if (std::isinf(B)) return kInf;
    return (A / len) * std::pow(B / len, p - 1.0);
}

namespace detail {

// Supremum of f over grid interval pairs, refined dyadically. Values are
// cumulative across levels (the families are nested), witnesses keep the
// first maximizer in scan order (lexicographic in (a,b)), and refinement
// stops once the supremum is +inf. f returning nullopt means the pair is not
// in the family.
template <typename F>
ConstantReport scan_interval_family(const Interval& window, const GridSpec& g, F&& f) {
    validate(g);
    ConstantReport rep;
    double best = -kInf;
    size_t family_size = 0;
    int last_level = 0;
    for (int l = 0; l <= g.refine_levels; ++l) {
        last_level = l;
        std::vector<double> xs = grid_points(window, g, l);
        for (size_t i = 0; i + 1 < xs.size(); ++i) {
            for (size_t j = i + 1; j < xs.size(); ++j) {
                if (!within_max_length(g, xs[j] - xs[i])) break;
                std::optional<double> v = f(xs[i], xs[j]);
                if (!v) continue;
                ++family_size;
                if (*v > best) {
                    best = *v;
                    rep.witness_interval = Interval{xs[i], xs[j]};
                }
            }
        }
        rep.levels.push_back(best);
        if (std::isinf(best)) break;
    }
    if (family_size == 0) throw std::invalid_argument("grid family is empty for this window");
    rep.constant = best;
    rep.grid_points = level_points(g, last_level);
    size_t n = rep.levels.size();
    rep.converged = n >= 2 && std::isfinite(rep.levels[n - 1]) &&
                    std::abs(rep.levels[n - 1] - rep.levels[n - 2]) <=
                        g.tolerance * std::max(std::abs(rep.levels[n - 1]), 1e-300);
    return rep;
}

} // namespace detail

// Grid supremum of the Muckenhoupt functional over subintervals of the
// window (certified lower bound for the true constant).
inline ConstantReport ap_constant(const Weight& w, double p, const Interval& window, const GridSpec& g) {
    if (!valid(window)) throw std::invalid_argument("ap: window needs finite a < b");
    if (!support_contains(w, window)) throw std::invalid_argument("ap: window must lie within the support");
    return detail::scan_interval_family(window, g, [&](double a, double b) {
        return std::optional<double>(ap_functional(w, p, {a, b}));
    });
}

enum class DoublingFamily {
    inside_window,  // balls with the doubled ball still inside the window
    ambient         // balls inside the window, doubles measured on all of R
};

// Grid supremum of mu(2B)/mu(B) over the chosen ball family. The ambient
// variant sees mass the window family cannot (its doubles overhang the
// window) and is what boundary-reflection estimates actually use.
inline ConstantReport doubling_constant(const MeasureModel& m, const Interval& window, const GridSpec& g,
                                        DoublingFamily family = DoublingFamily::inside_window) {
    validate(m);
    if (!valid(window)) throw std::invalid_argument("doubling: window needs finite a < b");
    if (!support_contains(m.density, window))
        throw std::invalid_argument("doubling: window must lie within the support");
    double slack = 1e-12 * (std::abs(window.a) + std::abs(window.b) + length(window));
    return detail::scan_interval_family(window, g, [&](double a, double b) -> std::optional<double> {
        Interval B{a, b};
        Interval D = doubled(B);
        if (family == DoublingFamily::inside_window &&
            (D.a < window.a - slack || D.b > window.b + slack))
            return std::nullopt;
        double mB = measure(m, B);
        if (!(mB > 0.0)) return std::nullopt;
        double mD = measure(m, D);
        if (std::isinf(mB)) return std::isinf(mD) ? std::optional<double>(1.0) : std::nullopt;
        return mD / mB;
    });
}

// Pair value of the sharp two-weight step bound at a test point t in I:
//   2*mu(I cap (-inf,t))*mu(I cap (t,inf)) / (|I|*mu(I)*w(t)).
// Every value is a certified lower bound for the sharp constant of I; the
// supremum over t is the constant itself. w(t) is the smaller one-sided
// density limit, so a density jump tests against its favorable side.
inline double step_lower_bound(const MeasureModel& m, const Interval& I, double t) {
    if (!valid(I) || !contains(I, t)) throw std::invalid_argument("step: t must be interior to I");
    double wt = eval_min_onesided(m.density, t);
    double muI = measure(m, I);
    double lo = measure(m, {I.a, t});
    double hi = measure(m, {t, I.b});
    double v = 2.0 * lo * hi / (length(I) * muI * wt);
    return std::isnan(v) ? 0.0 : v;
}

// Sharp optimal constant of the (b-a)-scaled 1-Poincare inequality on I,
// scanned over refined interior grid points. Interior zeros of the density
// drive the value to +inf (the inequality genuinely fails); zeros at the
// endpoints stay harmless.
inline ConstantReport sharp_poincare_constant(const MeasureModel& m, const Interval& I, const GridSpec& g) {
    validate(m);
    validate(g);
    if (!atom_free(m)) throw std::invalid_argument("poincare: atoms are not supported");
    if (!valid(I)) throw std::invalid_argument("poincare: interval needs finite a < b");
    ConstantReport rep;
    double muI = measure(m, I);
    if (!support_contains(m.density, I) || std::isinf(muI) || !(muI > 0.0)) {
        // density vanishing on part of I (or unbounded mass): no finite constant
        rep.constant = kInf;
        rep.levels = {kInf};
        rep.grid_points = level_points(g, 0);
        rep.converged = false;
        return rep;
    }
    double best = -kInf;
    int last_level = 0;
    for (int l = 0; l <= g.refine_levels; ++l) {
        last_level = l;
        std::vector<double> xs = grid_points(I, g, l);
        for (size_t k = 1; k + 1 < xs.size(); ++k) {
            // shares the arithmetic path with step_lower_bound, so the grid
            // maximum and the pointwise bounds sandwich exactly
            double v = step_lower_bound(m, I, xs[k]);
            if (v > best) {
                best = v;
                rep.witness_point = xs[k];
            }
        }
        rep.levels.push_back(best);
        if (std::isinf(best)) break;
    }
    rep.constant = best;
    rep.grid_points = level_points(g, last_level);
    size_t n = rep.levels.size();
    rep.converged = n >= 2 && std::isfinite(rep.levels[n - 1]) &&
                    std::abs(rep.levels[n - 1] - rep.levels[n - 2]) <=
                        g.tolerance * std::max(std::abs(rep.levels[n - 1]), 1e-300);
    return rep;
}

namespace detail {

// Per-level prefix masses over a grid; keeps segment queries O(1) and exact
// about infinite cells.
struct MeasurePrefix {
    std::vector<double> xs;
    std::vector<double> pref;     // finite part of mu(xs[0], xs[i])
    std::vector<int> inf_cells;   // running count of infinite cells

    MeasurePrefix(const MeasureModel& m, std::vector<double> points) : xs(std::move(points)) {
        pref.resize(xs.size(), 0.0);
        inf_cells.resize(xs.size(), 0);
        for (size_t i = 1; i < xs.size(); ++i) {
            double v = measure(m, {xs[i - 1], xs[i]});
            bool isinf = std::isinf(v);
            pref[i] = pref[i - 1] + (isinf ? 0.0 : v);
            inf_cells[i] = inf_cells[i - 1] + (isinf ? 1 : 0);
        }
    }
    double seg(size_t i, size_t j) const {
        if (inf_cells[j] > inf_cells[i]) return kInf;
        return pref[j] - pref[i];
    }
};

} // namespace detail

// Supremum of the sharp Poincare constant over grid subintervals of the
// window (optionally length-capped through GridSpec). The scan is cubic in
// the point count, so refinement self-caps at about a thousand points per
// level; convergence is judged on the levels actually run.
inline ConstantReport poincare_window_max(const MeasureModel& m, const Interval& window, const GridSpec& g) {
    validate(m);
    validate(g);
    if (!atom_free(m)) throw std::invalid_argument("poincare: atoms are not supported");
    if (!valid(window)) throw std::invalid_argument("poincare: window needs finite a < b");
    ConstantReport rep;
    if (!support_contains(m.density, window)) {
        rep.constant = kInf;
        rep.levels = {kInf};
        rep.grid_points = level_points(g, 0);
        rep.converged = false;
        return rep;
    }
    double best = -kInf;
    int last_level = 0;
    for (int l = 0; l <= g.refine_levels; ++l) {
        if (l > 0 && level_points(g, l) > 1040) break;
        last_level = l;
        std::vector<double> xs = grid_points(window, g, l);
        detail::MeasurePrefix mp(m, xs);
        std::vector<double> wv(xs.size());
        for (size_t k = 0; k < xs.size(); ++k) wv[k] = eval_min_onesided(m.density, xs[k]);
        size_t n = xs.size();
        for (size_t i = 0; i + 2 < n; ++i) {
            for (size_t j = i + 2; j < n; ++j) {
                double len = xs[j] - xs[i];
                if (!within_max_length(g, len)) break;
                double muI = mp.seg(i, j);
                if (!(muI > 0.0)) continue;
                for (size_t k = i + 1; k < j; ++k) {
                    double lo = mp.seg(i, k);
                    double hi = mp.seg(k, j);
                    double v = 2.0 * lo * hi / (len * muI * wv[k]);
                    if (std::isnan(v)) continue;
                    if (v > best) {
                        best = v;
                        rep.witness_interval = Interval{xs[i], xs[j]};
                        rep.witness_point = xs[k];
                    }
                }
            }
        }
        rep.levels.push_back(best);
        if (std::isinf(best)) break;
    }
    rep.constant = best;
    rep.grid_points = level_points(g, last_level);
    size_t nl = rep.levels.size();
    rep.converged = nl >= 2 && std::isfinite(rep.levels[nl - 1]) &&
                    std::abs(rep.levels[nl - 1] - rep.levels[nl - 2]) <=
                        g.tolerance * std::max(std::abs(rep.levels[nl - 1]), 1e-300);
    return rep;
}

// Ratio of the (b-a)-scaled Poincare sides for a concrete test function:
//   (avg of |u - mean| dmu) / (|I| * (avg of |u'|^p dmu)^{1/p}).
// Never exceeds the sharp constant when p = 1, and the sharp constant also
// dominates every p >= 1 by Jensen. Kink points carry no gradient mass, so
// atoms sitting exactly on a breakpoint do not contribute to the p-energy.
inline double empirical_pi_ratio(const PiecewiseLinearFn& u, const MeasureModel& m, double p, const Interval& I) {
    validate(u);
    validate(m);
    if (!(p >= 1.0)) throw std::invalid_argument("empirical: requires p >= 1");
    if (!valid(I)) throw std::invalid_argument("empirical: interval needs finite a < b");
    double muI = measure(m, I);
    if (!(muI > 0.0) || std::isinf(muI))
        throw std::invalid_argument("empirical: mu(I) must be positive and finite");

    std::vector<double> xs{I.a, I.b};
    for (double x : u.x)
        if (I.a < x && x < I.b) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    struct Seg { double a, b, slope, intercept; };
    std::vector<Seg> segs;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        double a = xs[i], b = xs[i + 1];
        double ua = plf_value(u, a), ub = plf_value(u, b);
        double s = (ub - ua) / (b - a);
        segs.push_back({a, b, s, ua - s * a});
    }

    const Weight& w = m.density;
    double m1 = 0.0;
    for (const Seg& s : segs)
        m1 += s.intercept * integrate(w, {s.a, s.b}) + s.slope * weight_moment(w, {s.a, s.b});
    for (const Atom& a : m.atoms) {
        // fold periodic atoms into I
        if (!w.periodic) {
            if (contains(I, a.location)) m1 += a.mass * plf_value(u, a.location);
        } else {
            double L = w.period();
            double k0 = std::ceil((I.a - a.location) / L);
            for (double k = k0; a.location + k * L < I.b; k += 1.0) {
                double loc = a.location + k * L;
                if (loc > I.a) m1 += a.mass * plf_value(u, loc);
            }
        }
    }
    double mean = m1 / muI;

    auto abs_linear_integral = [&](const Seg& s, double a, double b) {
        // integral of |u - mean| dmu_density over (a,b), u linear there
        double total = 0.0;
        auto signed_part = [&](double x1, double x2) {
            if (!(x1 < x2)) return;
            double v = (s.intercept - mean) * integrate(w, {x1, x2}) + s.slope * weight_moment(w, {x1, x2});
            total += std::abs(v);
        };
        double ga = s.intercept + s.slope * a - mean;
        double gb = s.intercept + s.slope * b - mean;
        if (s.slope != 0.0 && ((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0))) {
            double r = (mean - s.intercept) / s.slope;
            signed_part(a, r);
            signed_part(r, b);
        } else {
            signed_part(a, b);
        }
        return total;
    };

    double num = 0.0;
    for (const Seg& s : segs) num += abs_linear_integral(s, s.a, s.b);
    for (const Atom& a : m.atoms) {
        if (!w.periodic) {
            if (contains(I, a.location)) num += a.mass * std::abs(plf_value(u, a.location) - mean);
        } else {
            double L = w.period();
            double k0 = std::ceil((I.a - a.location) / L);
            for (double k = k0; a.location + k * L < I.b; k += 1.0) {
                double loc = a.location + k * L;
                if (loc > I.a) num += a.mass * std::abs(plf_value(u, loc) - mean);
            }
        }
    }

    double energy = 0.0;
    for (const Seg& s : segs)
        if (s.slope != 0.0) energy += std::pow(std::abs(s.slope), p) * measure(m, {s.a, s.b});
    if (energy == 0.0) return num == 0.0 ? 0.0 : kInf;
    return (num / muI) / (length(I) * std::pow(energy / muI, 1.0 / p));
}

// Near-extremal test function for the Muckenhoupt functional on I.
//   p > 1: u(y) grows along w/(w + eps)^{p/(p-1)}; with eps = 0 the exact
//          conjugate-power profile (requires the conjugate integral finite).
//   p = 1: unit-slope ramp through the sublevel set {w < essinf + eps}.
// Outside I the function is constant (0 on the left of I).
struct ExtremalFunction {
    PiecewiseLinearFn fn;
    double increment;  // total rise across I
};

inline ExtremalFunction extremal_test_function(const Weight& w, double p, const Interval& I,
                                               double eps, int node_count = 129) {
    if (!(p >= 1.0)) throw std::invalid_argument("extremal: requires p >= 1");
    if (!valid(I)) throw std::invalid_argument("extremal: interval needs finite a < b");
    if (eps < 0.0) throw std::invalid_argument("extremal: eps must be >= 0");
    if (node_count < 9) throw std::invalid_argument("extremal: too few nodes");

    ExtremalFunction out;
    if (p == 1.0) {
        if (!(eps > 0.0)) throw std::invalid_argument("extremal: p = 1 needs eps > 0");
        double mv = essinf(w, I);
        std::vector<Interval> E = sublevel_set(w, I, mv + eps);
        std::vector<double> bx{I.a};
        std::vector<double> by{0.0};
        double cum = 0.0;
        for (const Interval& c : E) {
            if (c.a > bx.back()) {
                bx.push_back(c.a);
                by.push_back(cum);
            }
            cum += length(c);
            bx.push_back(c.b);
            by.push_back(cum);
        }
        if (bx.back() < I.b) {
            bx.push_back(I.b);
            by.push_back(cum);
        }
        if (bx.size() < 2) {
            bx.push_back(I.b);
            by.push_back(cum);
        }
        out.fn = {std::move(bx), std::move(by)};
        validate(out.fn);
        out.increment = cum;
        return out;
    }

    // node set: uniform + structural points of w inside I
    std::vector<double> nodes;
    for (int i = 0; i < node_count; ++i)
        nodes.push_back(I.a + (I.b - I.a) * i / (node_count - 1));
    auto add_inside = [&](double x) {
        if (I.a < x && x < I.b) nodes.push_back(x);
    };
    if (!w.periodic) {
        for (const Piece& piece : w.pieces) {
            add_inside(piece.iv.a);
            add_inside(piece.iv.b);
            for (const PrimitiveTerm& t : piece.terms)
                if (t.kind == TermKind::power) add_inside(t.center);
        }
    } else {
        double L = w.period();
        auto add_shifted = [&](double x0) {
            double k0 = std::ceil((I.a - x0) / L);
            for (double k = k0; x0 + k * L < I.b; k += 1.0) add_inside(x0 + k * L);
        };
        for (const Piece& piece : w.pieces) {
            add_shifted(piece.iv.a);
            add_shifted(piece.iv.b);
            for (const PrimitiveTerm& t : piece.terms)
                if (t.kind == TermKind::power) add_shifted(t.center);
        }
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    nodes.front() = I.a;
    nodes.back() = I.b;

    double s = 1.0 / (1.0 - p);
    double q = p / (p - 1.0);
    std::vector<double> ys{0.0};
    double cum = 0.0;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        double a = nodes[i], b = nodes[i + 1];
        double cell;
        if (eps == 0.0) {
            cell = integrate_power(w, s, {a, b});
            if (std::isinf(cell))
                throw std::invalid_argument("extremal: conjugate integral diverges, use eps > 0");
        } else {
            cell = detail::adaptive_simpson(
                [&](double x) {
                    double v = eval(w, x);
                    if (std::isinf(v)) return 0.0;
                    return v * std::pow(v + eps, -q);
                },
                a, b, 1e-10, 28);
        }
        cum += cell;
        ys.push_back(cum);
    }
    out.fn = {std::move(nodes), std::move(ys)};
    validate(out.fn);
    out.increment = cum;
    return out;
}

// Telescoping Hoelder bound: on each interval
//   |u(b) - u(a)| <= (int |u'|^p w)^{1/p} * (int w^{1/(1-p)})^{1-1/p},
// plus the summed version. Intervals with a divergent conjugate integral get
// bound +inf and are flagged vacuous. Equality iff u is linear and w constant
// on the interval.
inline ChainReport holder_chain_bound(const PiecewiseLinearFn& u, const Weight& w, double p,
                                      const std::vector<Interval>& intervals) {
    validate(u);
    if (!(p > 1.0)) throw std::invalid_argument("holder: requires p > 1");
    if (intervals.empty()) throw std::invalid_argument("holder: need at least one interval");
    for (size_t i = 0; i < intervals.size(); ++i) {
        if (!valid(intervals[i])) throw std::invalid_argument("holder: bad interval");
        if (i > 0 && intervals[i].a < intervals[i - 1].b)
            throw std::invalid_argument("holder: intervals must be sorted and disjoint");
    }

    ChainReport chain;
    double lhs_sum = 0.0, rhs_sum = 0.0;
    bool sum_vacuous = false;
    for (size_t j = 0; j < intervals.size(); ++j) {
        const Interval& I = intervals[j];
        double energy = 0.0;
        std::vector<double> xs{I.a, I.b};
        for (double x : u.x)
            if (I.a < x && x < I.b) xs.push_back(x);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        for (size_t i = 0; i + 1 < xs.size(); ++i) {
            double ua = plf_value(u, xs[i]), ub = plf_value(u, xs[i + 1]);
            double slope = (ub - ua) / (xs[i + 1] - xs[i]);
            if (slope != 0.0)
                energy += std::pow(std::abs(slope), p) * integrate(w, {xs[i], xs[i + 1]});
        }
        double conj = integrate_power(w, 1.0 / (1.0 - p), I);
        double lhs = std::abs(plf_value(u, I.b) - plf_value(u, I.a));

        CheckRow row;
        char label[32];
        std::snprintf(label, sizeof label, "interval.%02zu", j);
        row.name = label;
        row.measured = lhs;
        if (std::isinf(conj) || std::isinf(energy)) {
            row.bound = kInf;
            row.vacuous = true;
            sum_vacuous = true;
        } else {
            row.bound = std::pow(energy, 1.0 / p) * std::pow(conj, 1.0 - 1.0 / p);
            row.pass = lhs <= row.bound + 1e-12 * std::max(1.0, row.bound);
            rhs_sum += row.bound;
        }
        lhs_sum += lhs;
        finalize(row);
        chain.checks.push_back(row);
    }
    CheckRow total;
    total.name = "summed";
    total.measured = lhs_sum;
    if (sum_vacuous) {
        total.bound = kInf;
        total.vacuous = true;
    } else {
        total.bound = rhs_sum;
        total.pass = lhs_sum <= rhs_sum + 1e-12 * std::max(1.0, rhs_sum);
    }
    finalize(total);
    chain.checks.push_back(total);
    finalize(chain);
    return chain;
}

} // namespace ap1d
