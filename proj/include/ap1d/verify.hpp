#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "functionals.hpp"

namespace ap1d {

namespace detail {

// fp allowance on proof-chain inequalities; this is arithmetic slack, not a
// model tolerance (grid tolerances live in GridSpec).
inline bool le_with_slack(double measured, double bound) {
    if (std::isnan(measured) || std::isnan(bound)) return false;
    return measured <= bound * (1.0 + 1e-9) + 1e-300;
}

// relative change across the last refinement; +inf when the scan never made
// it to a second finite level.
inline double rel_change(const ConstantReport& r) {
    size_t n = r.levels.size();
    if (n < 2) return kInf;
    double last = r.levels[n - 1], prev = r.levels[n - 2];
    if (!std::isfinite(last) || !std::isfinite(prev)) return kInf;
    return std::abs(last - prev) / std::max(std::abs(last), 1e-300);
}

inline CheckRow bound_row(std::string name, double measured, double bound) {
    CheckRow row;
    row.name = std::move(name);
    row.measured = measured;
    row.bound = bound;
    row.pass = le_with_slack(measured, bound);
    finalize(row);
    return row;
}

inline CheckRow converged_row(std::string name, const ConstantReport& r, const GridSpec& g) {
    CheckRow row;
    row.name = std::move(name);
    row.measured = rel_change(r);
    row.bound = g.tolerance;
    row.pass = row.measured <= row.bound;
    finalize(row);
    return row;
}

inline CheckRow vacuous_row(std::string name, double measured = std::nan(""), double bound = std::nan("")) {
    CheckRow row;
    row.name = std::move(name);
    row.measured = measured;
    row.bound = bound;
    row.vacuous = true;
    finalize(row);
    return row;
}

// 0/1 encoded boolean assertion: measured 0 iff ok, bound 0.
inline CheckRow verdict_row(std::string name, bool ok) {
    CheckRow row;
    row.name = std::move(name);
    row.measured = ok ? 0.0 : 1.0;
    row.bound = 0.0;
    row.pass = ok;
    finalize(row);
    return row;
}

// largest refinement level whose point count stays within the cap (quadratic
// and cubic family scans pin their cost here)
inline int capped_level(const GridSpec& g, int max_points) {
    int lvl = 0;
    while (lvl < g.refine_levels && level_points(g, lvl + 1) <= max_points) ++lvl;
    return lvl;
}

} // namespace detail

// Doubling plus a 1-Poincare certificate on grid subintervals of the window.
// The certificate is exactly the admissibility statement at p = 1; for p > 1
// it is sufficient but not necessary, so a diverging certificate only turns
// its row vacuous and the verdict follows doubling, provided the Poincare
// scan stayed finite (a hard +inf, say from a dead subinterval, still
// falsifies).
struct AdmissibilityReport {
    ConstantReport doubling;
    ConstantReport poincare;
    ChainReport chain;
    bool verdict = false;
};

inline AdmissibilityReport check_admissible_within(const MeasureModel& m, double p,
                                                   const Interval& window, const GridSpec& g) {
    if (!(p >= 1.0)) throw std::invalid_argument("admissible: requires p >= 1");
    if (!support_contains(m.density, window))
        throw std::invalid_argument("admissible: window must lie within the support");
    AdmissibilityReport rep;
    rep.doubling = doubling_constant(m, window, g);
    CheckRow d = detail::converged_row("doubling.converged", rep.doubling, g);

    CheckRow pi;
    if (atom_free(m)) {
        rep.poincare = poincare_window_max(m, window, g);
        pi = detail::converged_row("poincare.converged", rep.poincare, g);
        bool pi_certified = pi.pass;
        if (!pi_certified && p > 1.0) pi.vacuous = true;  // inconclusive, not false
        finalize(pi);
        rep.verdict = d.pass && (pi_certified || (p > 1.0 && std::isfinite(rep.poincare.constant)));
    } else {
        // the sharp-constant machinery certifies densities only; an atomic
        // part leaves the Poincare side uncertified, so the verdict is false
        rep.poincare.constant = std::nan("");
        rep.poincare.converged = false;
        pi = detail::vacuous_row("poincare.converged");
        rep.verdict = false;
    }
    rep.chain.checks.push_back(d);
    rep.chain.checks.push_back(pi);
    rep.chain.checks.push_back(detail::verdict_row("verdict", rep.verdict));
    finalize(rep.chain);
    return rep;
}

// From a converged Muckenhoupt constant on the window: quantitative doubling
// rows (mu(2I) <= 2^p C mu(I) for doubled intervals inside the window),
// admissibility on the concentric half window, and at p = 1 the direct sharp
// Poincare bound C/2 there.
inline ChainReport verify_half_window_admissible(const Weight& w, double p, const Interval& window,
                                                 const GridSpec& g) {
    if (!(p >= 1.0)) throw std::invalid_argument("half-window: requires p >= 1");
    if (!support_contains(w, window))
        throw std::invalid_argument("half-window: window must lie within the support");
    MeasureModel m = as_measure(w);
    ConstantReport ap = ap_constant(w, p, window, g);
    bool hyp = std::isfinite(ap.constant) && ap.converged;

    ChainReport chain;
    CheckRow gate = detail::converged_row("ap.hypothesis.converged", ap, g);
    if (!hyp) {
        gate.vacuous = true;
        finalize(gate);
        chain.checks.push_back(gate);
        chain.checks.push_back(detail::vacuous_row("doubling.window.2p-bound"));
        chain.checks.push_back(detail::vacuous_row("half.doubling.2p-bound"));
        chain.checks.push_back(detail::vacuous_row("half.doubling.converged"));
        chain.checks.push_back(detail::vacuous_row("half.poincare.converged"));
        if (p == 1.0) chain.checks.push_back(detail::vacuous_row("half.poincare.half-ap-bound"));
        chain.checks.push_back(detail::vacuous_row("half.admissible.verdict"));
        finalize(chain);
        return chain;
    }
    chain.checks.push_back(gate);

    double cap = std::pow(2.0, p) * ap.constant;
    ConstantReport dbl = doubling_constant(m, window, g);
    chain.checks.push_back(detail::bound_row("doubling.window.2p-bound", dbl.constant, cap));

    AdmissibilityReport adm = check_admissible_within(m, p, half(window), g);
    chain.checks.push_back(detail::bound_row("half.doubling.2p-bound", adm.doubling.constant, cap));
    chain.checks.push_back(detail::converged_row("half.doubling.converged", adm.doubling, g));
    CheckRow pi = detail::converged_row("half.poincare.converged", adm.poincare, g);
    if (!pi.pass && p > 1.0) pi.vacuous = true;
    finalize(pi);
    chain.checks.push_back(pi);
    if (p == 1.0)
        chain.checks.push_back(
            detail::bound_row("half.poincare.half-ap-bound", adm.poincare.constant, 0.5 * ap.constant));
    chain.checks.push_back(detail::verdict_row("half.admissible.verdict", adm.verdict));
    finalize(chain);
    return chain;
}

// From a finite sharp Poincare constant over subintervals of the window: the
// Muckenhoupt functional of every grid interval I with theta*I inside the
// window obeys A_p(I) <= (C_PI/(2 c_I))^p, c_I = min(mu(left gap), mu(right
// gap))/(2 mu(theta I)). The extremal row tracks the empirical Poincare ratio
// of the near-extremal test function against its eps -> 0 limit on the worst
// interval. Hypothesis gate: vacuous when C_PI is +inf, or at p = 1 when the
// certificate did not converge (there the constant is the hypothesis itself).
inline ChainReport verify_ap_from_poincare(const MeasureModel& m, double p, const Interval& window,
                                           double theta, const GridSpec& g) {
    if (!(p >= 1.0)) throw std::invalid_argument("ap-from-poincare: requires p >= 1");
    if (!(theta > 1.0)) throw std::invalid_argument("ap-from-poincare: requires theta > 1");
    if (!atom_free(m)) throw std::invalid_argument("ap-from-poincare: atoms are not supported");
    if (!support_contains(m.density, window))
        throw std::invalid_argument("ap-from-poincare: window must lie within the support");

    ConstantReport cw = poincare_window_max(m, window, g);
    double cpi = cw.constant;
    bool vac = std::isinf(cpi) || (p == 1.0 && !cw.converged);

    ChainReport chain;
    CheckRow gate = detail::converged_row("hypothesis.poincare.converged", cw, g);
    if (!gate.pass) gate.vacuous = true;  // partial certificate: reported, not asserted
    finalize(gate);
    chain.checks.push_back(gate);

    if (vac) {
        chain.checks.push_back(detail::vacuous_row("ap-window.bound-ratio", std::nan(""), cpi));
        chain.checks.push_back(detail::vacuous_row("extremal.limit-gap"));
        finalize(chain);
        return chain;
    }

    const Weight& w = m.density;
    int lvl = detail::capped_level(g, 1040);
    std::vector<double> xs = grid_points(window, g, lvl);
    double slack = 1e-12 * (std::abs(window.a) + std::abs(window.b) + length(window));
    double worst = -kInf;
    Interval worst_iv{0.0, 0.0};
    bool found = false;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        for (size_t j = i + 1; j < xs.size(); ++j) {
            Interval I{xs[i], xs[j]};
            if (!within_max_length(g, length(I))) break;
            Interval T = scaled(I, theta);
            if (T.a < window.a - slack || T.b > window.b + slack) continue;
            double mu_left = measure(m, {T.a, I.a});
            double mu_right = measure(m, {I.b, T.b});
            double mu_theta = measure(m, T);
            double c_i = std::min(mu_left, mu_right) / (2.0 * mu_theta);
            double bound = std::pow(cpi / (2.0 * c_i), p);
            double apv = ap_functional(w, p, I);
            double ratio = std::isinf(apv) && std::isinf(bound) ? 1.0 : apv / bound;
            if (std::isnan(ratio)) continue;
            found = true;
            if (ratio > worst) {
                worst = ratio;
                worst_iv = I;
            }
        }
    }
    if (!found) throw std::invalid_argument("ap-from-poincare: no grid interval fits theta*I in the window");
    chain.checks.push_back(detail::bound_row("ap-window.bound-ratio", worst, 1.0));

    // extremal trend on the worst interval, ratios measured over theta*I
    Interval T = scaled(worst_iv, theta);
    auto ratio_at = [&](double eps) {
        ExtremalFunction u = extremal_test_function(w, p, worst_iv, eps);
        return empirical_pi_ratio(u.fn, m, p, T);
    };
    double binding = (p == 1.0) ? ratio_at(1e-6) : ratio_at(0.0);
    double at4 = ratio_at(1e-4);
    double gap = (binding == 0.0) ? (at4 == 0.0 ? 0.0 : kInf)
                                  : std::abs(at4 - binding) / binding;
    chain.checks.push_back(detail::bound_row("extremal.limit-gap", gap, 0.10));
    finalize(chain);
    return chain;
}

// Reflect w|(0,M) about M, extend 2M-periodically, and check the reflected
// Muckenhoupt constants over (-span, span): all intervals against 3^p times
// the (0,M) constant, intervals no longer than M against 2^p times it, and
// the (0,M) constant itself against the global one (family restriction).
inline ChainReport verify_reflection_bound(const Weight& w, double p, double M, double span,
                                           const GridSpec& g) {
    if (!(p >= 1.0)) throw std::invalid_argument("reflect-verify: requires p >= 1");
    if (!(M > 0.0) || !(span > M)) throw std::invalid_argument("reflect-verify: need 0 < M < span");
    ConstantReport base = ap_constant(w, p, {0.0, M}, g);
    bool hyp = std::isfinite(base.constant) && base.converged;

    ChainReport chain;
    CheckRow gate = detail::converged_row("hypothesis.ap-unit.converged", base, g);
    if (!hyp) {
        gate.vacuous = true;
        finalize(gate);
        chain.checks.push_back(gate);
        chain.checks.push_back(detail::vacuous_row("global.3p-bound"));
        chain.checks.push_back(detail::vacuous_row("short.2p-bound"));
        chain.checks.push_back(detail::vacuous_row("restriction.dominated"));
        finalize(chain);
        return chain;
    }
    chain.checks.push_back(gate);

    Weight hatw = reflect_periodic(w, M);
    Interval window{-span, span};
    GridSpec unrestricted = g;
    unrestricted.max_interval_length.reset();
    ConstantReport global = ap_constant(hatw, p, window, unrestricted);
    GridSpec short_spec = g;
    short_spec.max_interval_length = M;
    ConstantReport shorts = ap_constant(hatw, p, window, short_spec);

    chain.checks.push_back(
        detail::bound_row("global.3p-bound", global.constant, std::pow(3.0, p) * base.constant));
    chain.checks.push_back(
        detail::bound_row("short.2p-bound", shorts.constant, std::pow(2.0, p) * base.constant));
    chain.checks.push_back(detail::bound_row("restriction.dominated", base.constant, global.constant));
    finalize(chain);
    return chain;
}

// Even reflection about 0 and M of mu restricted to (0, M). Hypothesis: mu is
// admissible within (-M, 2M) (vacuous when the support does not even cover
// that window). Checks: two-sided comparability of mu((0,a)) and mu((-a,0))
// against the square of the ambient doubling constant, doubling of the
// reflected measure on balls inside (-M, M) of length at most M against
// 4 C_d^3, and a converged sharp Poincare scan of the reflected measure over
// subintervals of length at most M/2.
inline ChainReport verify_even_reflection(const MeasureModel& m, double p, double M, const GridSpec& g) {
    if (!(M > 0.0) || !std::isfinite(M)) throw std::invalid_argument("even-reflection: M must be positive");
    Interval H{-M, 2.0 * M};
    ChainReport chain;
    if (!support_contains(m.density, H)) {
        chain.checks.push_back(detail::vacuous_row("hypothesis.window-in-support", 1.0, 0.0));
        chain.checks.push_back(detail::vacuous_row("hypothesis.admissible"));
        chain.checks.push_back(detail::vacuous_row("ambient-doubling.converged"));
        chain.checks.push_back(detail::vacuous_row("comparability.pos-vs-neg"));
        chain.checks.push_back(detail::vacuous_row("comparability.neg-vs-pos"));
        chain.checks.push_back(detail::vacuous_row("reflected.doubling.4cd3-bound"));
        chain.checks.push_back(detail::vacuous_row("reflected.poincare.converged"));
        finalize(chain);
        return chain;
    }
    chain.checks.push_back(detail::verdict_row("hypothesis.window-in-support", true));

    AdmissibilityReport adm = check_admissible_within(m, p, H, g);
    if (!adm.verdict) {
        CheckRow gate = detail::vacuous_row("hypothesis.admissible", 1.0, 0.0);
        chain.checks.push_back(gate);
        chain.checks.push_back(detail::vacuous_row("ambient-doubling.converged"));
        chain.checks.push_back(detail::vacuous_row("comparability.pos-vs-neg"));
        chain.checks.push_back(detail::vacuous_row("comparability.neg-vs-pos"));
        chain.checks.push_back(detail::vacuous_row("reflected.doubling.4cd3-bound"));
        chain.checks.push_back(detail::vacuous_row("reflected.poincare.converged"));
        finalize(chain);
        return chain;
    }
    chain.checks.push_back(detail::verdict_row("hypothesis.admissible", true));

    ConstantReport ambient = doubling_constant(m, H, g, DoublingFamily::ambient);
    chain.checks.push_back(detail::converged_row("ambient-doubling.converged", ambient, g));
    double cd = ambient.constant;

    // comparability across 0 at the finest grid on (0, M)
    GridSpec fine = g;
    std::vector<double> as = grid_points({0.0, M}, fine, fine.refine_levels);
    double worst_pos = -kInf, worst_neg = -kInf;
    for (size_t k = 1; k + 1 < as.size(); ++k) {
        double a = as[k];
        double pos = measure(m, {0.0, a});
        double neg = measure(m, {-a, 0.0});
        worst_pos = std::max(worst_pos, pos / neg);
        worst_neg = std::max(worst_neg, neg / pos);
    }
    chain.checks.push_back(detail::bound_row("comparability.pos-vs-neg", worst_pos, cd * cd));
    chain.checks.push_back(detail::bound_row("comparability.neg-vs-pos", worst_neg, cd * cd));

    MeasureModel hat = reflect_even(m, M);
    GridSpec capped = g;
    capped.max_interval_length = capped.max_interval_length ? std::min(*capped.max_interval_length, M) : M;
    ConstantReport hat_dbl = doubling_constant(hat, {-M, M}, capped, DoublingFamily::ambient);
    chain.checks.push_back(
        detail::bound_row("reflected.doubling.4cd3-bound", hat_dbl.constant, 4.0 * cd * cd * cd));

    GridSpec half_capped = g;
    half_capped.max_interval_length =
        half_capped.max_interval_length ? std::min(*half_capped.max_interval_length, 0.5 * M) : 0.5 * M;
    ConstantReport hat_pi = poincare_window_max(hat, {-M, M}, half_capped);
    chain.checks.push_back(detail::converged_row("reflected.poincare.converged", hat_pi, g));
    finalize(chain);
    return chain;
}

// Muckenhoupt constants of lattice combinations against the larger input
// constant C_I per interval: sum and max stay within 2 C_I, min within
// 2^{p-1} C_I. Intervals where either input constant is infinite are outside
// the claim and skipped; the intervals.checked row records how many were
// asserted.
inline ChainReport verify_lattice_bounds(const Weight& w1, const Weight& w2, double p,
                                         const Interval& window, const GridSpec& g) {
    if (!(p >= 1.0)) throw std::invalid_argument("lattice-verify: requires p >= 1");
    if (!support_contains(w1, window) || !support_contains(w2, window))
        throw std::invalid_argument("lattice-verify: window must lie within both supports");
    Weight ws = lattice_sum(w1, w2);
    Weight wx = lattice_max(w1, w2);
    Weight wn = lattice_min(w1, w2);

    int lvl = detail::capped_level(g, 600);
    std::vector<double> xs = grid_points(window, g, lvl);
    double worst_sum = -kInf, worst_max = -kInf, worst_min = -kInf;
    double scale_pair = 2.0;
    double scale_min = std::pow(2.0, p - 1.0);
    long checked = 0;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        for (size_t j = i + 1; j < xs.size(); ++j) {
            Interval I{xs[i], xs[j]};
            if (!within_max_length(g, length(I))) break;
            double c1 = ap_functional(w1, p, I);
            double c2 = ap_functional(w2, p, I);
            double ci = std::max(c1, c2);
            if (std::isinf(ci)) continue;
            ++checked;
            worst_sum = std::max(worst_sum, ap_functional(ws, p, I) / (scale_pair * ci));
            worst_max = std::max(worst_max, ap_functional(wx, p, I) / (scale_pair * ci));
            worst_min = std::max(worst_min, ap_functional(wn, p, I) / (scale_min * ci));
        }
    }
    ChainReport chain;
    chain.checks.push_back(detail::bound_row("sum.2c-bound-ratio", worst_sum, 1.0));
    chain.checks.push_back(detail::bound_row("max.2c-bound-ratio", worst_max, 1.0));
    chain.checks.push_back(detail::bound_row("min.2p1c-bound-ratio", worst_min, 1.0));
    chain.checks.push_back(detail::vacuous_row("intervals.checked", static_cast<double>(checked)));
    finalize(chain);
    return chain;
}

// Dual-weight identity: A_{p'}(w^{1/(1-p)}, I) since computed directly must
// agree with A_p(w, I)^{1/(p-1)} on every grid interval, and conjugation must
// be an involution pointwise.
inline ChainReport verify_duality(const Weight& w, double p, const Interval& window, const GridSpec& g) {
    if (!(p > 1.0)) throw std::invalid_argument("duality: requires p > 1");
    if (!support_contains(w, window))
        throw std::invalid_argument("duality: window must lie within the support");
    Weight v = conjugate(w, p);
    double pp = p / (p - 1.0);

    int lvl = detail::capped_level(g, 600);
    std::vector<double> xs = grid_points(window, g, lvl);
    double worst = 0.0;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        for (size_t j = i + 1; j < xs.size(); ++j) {
            Interval I{xs[i], xs[j]};
            if (!within_max_length(g, length(I))) break;
            double lhs = ap_functional(v, pp, I);
            double rhs = std::pow(ap_functional(w, p, I), 1.0 / (p - 1.0));
            if (std::isinf(lhs) && std::isinf(rhs)) continue;
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
        }
    }
    ChainReport chain;
    chain.checks.push_back(detail::bound_row("duality.max-rel-diff", worst, 1e-12));

    Weight back = conjugate(v, pp);
    double worst_inv = 0.0;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        double x = 0.5 * (xs[i] + xs[i + 1]);
        double a = eval(w, x), b = eval(back, x);
        if (std::isinf(a) && std::isinf(b)) continue;
        worst_inv = std::max(worst_inv, std::abs(a - b) / std::max(std::abs(a), 1e-300));
    }
    chain.checks.push_back(detail::bound_row("involution.max-rel-diff", worst_inv, 1e-12));
    finalize(chain);
    return chain;
}

// The power-weight dichotomy on (0,1): the sharp Poincare constant stays
// within 2 on every subinterval and doubling converges for any alpha >= 0,
// while the Muckenhoupt constant diverges exactly when p < 1 + alpha (the
// boundary p = 1 + alpha is excluded from assertions and reported vacuous).
inline ChainReport counterexample_suite(double alpha, double p, const GridSpec& g) {
    if (!(p >= 1.0)) throw std::invalid_argument("counterexample: requires p >= 1");
    Weight w = power_weight(alpha, {0.0, 1.0});
    MeasureModel m = as_measure(w);

    ChainReport chain;
    ConstantReport pi = poincare_window_max(m, {0.0, 1.0}, g);
    chain.checks.push_back(detail::bound_row("poincare.le-2", pi.constant, 2.0));
    ConstantReport dbl = doubling_constant(m, {0.0, 1.0}, g);
    chain.checks.push_back(detail::converged_row("doubling.converged", dbl, g));

    ConstantReport ap = ap_constant(w, p, {0.0, 1.0}, g);
    if (p < 1.0 + alpha) {
        chain.checks.push_back(detail::verdict_row("ap.divergent", std::isinf(ap.constant)));
    } else if (p > 1.0 + alpha) {
        chain.checks.push_back(detail::converged_row("ap.finite-converged", ap, g));
    } else {
        chain.checks.push_back(detail::vacuous_row("ap.boundary-excluded", ap.constant));
    }
    finalize(chain);
    return chain;
}

// Per-center constants over sliding windows of fixed radius, classified as
//   uniformly-local          all finite+converged, spread at most cap
//   semiuniformly-local-only all finite+converged, spread beyond cap
//   not-locally-verified     some center failed to converge (or diverged)
// The worse of the Muckenhoupt and doubling classifications wins.
inline SweepReport window_sweep(const Weight& w, double p, double radius,
                                const std::vector<double>& centers, const GridSpec& g,
                                double cap = 8.0) {
    if (!(radius > 0.0)) throw std::invalid_argument("sweep: radius must be positive");
    if (centers.empty()) throw std::invalid_argument("sweep: need at least one center");
    if (!(cap >= 1.0)) throw std::invalid_argument("sweep: cap must be >= 1");
    SweepReport rep;
    rep.radius = radius;
    rep.cap = cap;
    MeasureModel m = as_measure(w);
    for (double c : centers) {
        Interval window{c - radius, c + radius};
        if (!support_contains(w, window))
            throw std::invalid_argument("sweep: window must lie within the support");
        SweepEntry e;
        e.center = c;
        e.ap = ap_constant(w, p, window, g);
        e.doubling = doubling_constant(m, window, g);
        rep.entries.push_back(std::move(e));
    }
    auto classify = [&](auto pick) {
        double lo = kInf, hi = -kInf;
        for (const SweepEntry& e : rep.entries) {
            const ConstantReport& r = pick(e);
            if (!std::isfinite(r.constant) || !r.converged) return 2;
            lo = std::min(lo, r.constant);
            hi = std::max(hi, r.constant);
        }
        return hi <= cap * lo ? 0 : 1;
    };
    int cls = std::max(classify([](const SweepEntry& e) -> const ConstantReport& { return e.ap; }),
                       classify([](const SweepEntry& e) -> const ConstantReport& { return e.doubling; }));
    rep.classification = cls == 0 ? "uniformly-local"
                       : cls == 1 ? "semiuniformly-local-only"
                                  : "not-locally-verified";
    return rep;
}

} // namespace ap1d
