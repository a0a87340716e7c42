// Acceptance battery: twelve end-to-end checks over the public API, one
// pass/fail line each, exit 0 iff every one holds. Tolerances are pinned
// here on purpose; loosening them is a library regression, not a test fix.
#include "support.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace ap1d;

namespace {

int failures = 0;

void criterion(int id, const char* label, const std::function<void()>& body) {
    std::string detail;
    try {
        body();
    } catch (const std::exception& e) {
        detail = e.what();
    }
    bool ok = detail.empty();
    if (!ok) ++failures;
    std::printf("[%s] %02d %s%s%s\n", ok ? "PASS" : "FAIL", id, label, ok ? "" : ": ", detail.c_str());
    std::fflush(stdout);
}

struct check_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw check_failure(what);
}

void require_close(double value, double target, double tol, const std::string& what) {
    if (!(std::abs(value - target) <= tol))
        throw check_failure(what + ": got " + std::to_string(value) + ", want " + std::to_string(target));
}

const CheckRow& row(const ChainReport& chain, const std::string& name) {
    for (const CheckRow& r : chain.checks)
        if (r.name == name) return r;
    throw check_failure("missing check row " + name);
}

} // namespace

int main() {
    criterion(1, "flat baseline: ap constant 1, doubling 2, sharp poincare 1/2", [] {
        Weight leb = parse_weight("1 on (-1,1)");
        GridSpec g{129, 1, {}, 1e-3};
        for (double p : {1.0, 2.0, 3.0}) {
            ConstantReport r = ap_constant(leb, p, {-1.0, 1.0}, g);
            require_close(r.constant, 1.0, 1e-12, "ap constant at p=" + std::to_string(p));
            require(r.converged, "ap constant must converge");
        }
        ConstantReport d = doubling_constant(as_measure(leb), {-1.0, 1.0}, g);
        require_close(d.constant, 2.0, 1e-12, "doubling constant");
        require(d.converged, "doubling must converge");
        ConstantReport cw =
            sharp_poincare_constant(as_measure(parse_weight("1 on (0,1)")), {0.0, 1.0}, GridSpec{257, 0, {}, 1e-3});
        require_close(cw.constant, 0.5, 1e-6, "sharp poincare constant of the unit interval");
    });

    criterion(2, "square-root power weight: closed-form ap constant 4/3", [] {
        Weight w = power_weight(0.5, {0.0, 1.0});
        double oracle = 1.0 / (1.0 - 0.5 * 0.5);
        require_close(ap_functional(w, 2.0, {0.0, 1.0}), oracle, 1e-12, "single-interval functional");
        ConstantReport r = ap_constant(w, 2.0, {0.0, 1.0}, GridSpec{129, 2, {}, 1e-3});
        require_close(r.constant, oracle, 1e-4, "window supremum");
        require(r.converged, "window supremum must converge");
    });

    criterion(3, "power-weight dichotomy: poincare and doubling survive where ap diverges", [] {
        GridSpec g{129, 1, {}, 1e-3};
        MeasureModel sq = as_measure(power_weight(2.0, {0.0, 1.0}));
        ConstantReport pi = poincare_window_max(sq, {0.0, 1.0}, g);
        require(pi.constant <= 2.0 + 1e-12, "sharp poincare constants must stay within 2");
        ConstantReport d = doubling_constant(sq, {0.0, 1.0}, g);
        require(std::isfinite(d.constant) && d.converged, "doubling must stay finite and converge");
        ConstantReport ap2 = ap_constant(power_weight(2.0, {0.0, 1.0}), 2.0, {0.0, 1.0}, g);
        require(std::isinf(ap2.constant), "quadratic weight must have divergent ap constant at p=2");
        require(ap2.witness_interval && ap2.witness_interval->a == 0.0,
                "divergence witness must abut the dead endpoint");
        ConstantReport aph = ap_constant(power_weight(0.5, {0.0, 1.0}), 2.0, {0.0, 1.0}, g);
        require(std::isfinite(aph.constant) && aph.converged,
                "square-root weight must keep a finite converged ap constant");
    });

    criterion(4, "periodic reflection: global ap within 3^p, short intervals within 2^p", [] {
        ChainReport r = verify_reflection_bound(power_weight(0.5, {0.0, 1.0}), 2.0, 1.0, 5.0,
                                                GridSpec{65, 2, {}, 1e-3});
        require(r.overall, "reflection chain must pass");
        for (const CheckRow& c : r.checks) require(!c.vacuous, "no vacuous rows: " + c.name);
        require_close(row(r, "global.3p-bound").bound, 12.0, 1e-9, "global cap 9 * 4/3");
        require_close(row(r, "short.2p-bound").bound, 16.0 / 3, 1e-9, "short-interval cap 4 * 4/3");
        require(row(r, "hypothesis.ap-unit.converged").pass, "base constant must converge");
    });

    criterion(5, "lattice sum/max/min constants within factor bounds on >= 10^4 intervals", [] {
        GridSpec g{129, 1, {}, 1e-3};  // 257-point family: 32896 grid intervals
        Weight one = parse_weight("1 on (0,1)");
        Weight root = power_weight(0.5, {0.0, 1.0});
        Weight mirrored = power_weight(0.5, {0.0, 1.0}, 1.0, 1.0);
        std::vector<std::pair<Weight, Weight>> pairs{{one, one}, {root, one}, {root, mirrored}};
        for (const auto& [a, b] : pairs) {
            for (double p : {1.0, 2.0, 3.0}) {
                ChainReport r = verify_lattice_bounds(a, b, p, {0.0, 1.0}, g);
                require(r.overall, "lattice bounds must hold at p=" + std::to_string(p));
                require(row(r, "intervals.checked").measured >= 1e4,
                        "need at least 10^4 asserted intervals");
            }
        }
    });

    criterion(6, "conjugate-exponent duality identity to 1e-12 on all grid intervals", [] {
        GridSpec g{65, 2, {}, 1e-3};  // 257-point family
        struct Case { Weight w; Interval window; };
        std::vector<Case> cases{{power_weight(0.5, {0.0, 1.0}), {0.0, 1.0}},
                                {exp_weight(1.0, {-1.0, 1.0}), {-1.0, 1.0}},
                                {constant_weight(3.0, {0.0, 1.0}), {0.0, 1.0}}};
        for (const Case& c : cases) {
            for (double p : {1.5, 2.0, 3.0}) {
                ChainReport r = verify_duality(c.w, p, c.window, g);
                require(r.overall, "duality must hold at p=" + std::to_string(p));
            }
        }
    });

    criterion(7, "step lower bounds, random test functions, ramp-approximated steps", [] {
        struct Case { Weight w; Interval iv; };
        std::vector<Case> cases{{parse_weight("1 on (0,1)"), {0.0, 1.0}},
                                {power_weight(0.5, {0.0, 1.0}), {0.0, 1.0}},
                                {exp_weight(1.0, {-1.0, 1.0}), {-1.0, 1.0}}};
        GridSpec g0{257, 0, {}, 1e-3};
        for (const Case& c : cases) {
            MeasureModel m = as_measure(c.w);
            ConstantReport cw = sharp_poincare_constant(m, c.iv, g0);
            std::vector<double> ts = grid_points(c.iv, g0, 0);
            double best = 0.0;
            for (size_t i = 1; i + 1 < ts.size(); ++i)
                best = std::max(best, step_lower_bound(m, c.iv, ts[i]));
            require(best == cw.constant, "grid max of step bounds must equal the sharp constant");

            for (int k = 0; k < 100; ++k) {
                PiecewiseLinearFn u = make_random_plf(c.iv, 3 + k % 6, 9000 + k);
                for (double p : {1.0, 2.0, 3.0})
                    require(empirical_pi_ratio(u, m, p, c.iv) <= cw.constant * (1.0 + 1e-3),
                            "random test function exceeded the sharp constant");
            }

            require(cw.witness_point.has_value(), "sharp constant must carry a witness point");
            double t = *cw.witness_point;
            double delta = 1e-4;
            PiecewiseLinearFn ramp{{c.iv.a, t - delta / 2, t + delta / 2, c.iv.b}, {0.0, 0.0, 1.0, 1.0}};
            double target = step_lower_bound(m, c.iv, t);
            require_close(empirical_pi_ratio(ramp, m, 1.0, c.iv), target, 0.02 * target,
                          "narrow ramp must reproduce the step bound");
        }
    });

    criterion(8, "poincare certificate caps ap constants; extremal ratio near its limit", [] {
        GridSpec g{65, 1, {}, 1e-3};
        std::vector<MeasureModel> ms{as_measure(parse_weight("1 on (-3,3)")),
                                     as_measure(parse_weight("|x-0|^0.5 on (-1,1)"))};
        bool saw_extremal = false;
        for (const MeasureModel& m : ms) {
            for (double p : {1.0, 2.0}) {
                for (double theta : {1.5, 2.0}) {
                    ChainReport r = verify_ap_from_poincare(m, p, {-1.0, 1.0}, theta, g);
                    require(r.overall, "certificate chain must pass");
                    const CheckRow& gap = row(r, "extremal.limit-gap");
                    if (!gap.vacuous) {
                        require(gap.measured <= 0.10, "extremal ratio must sit within 10% of its limit");
                        saw_extremal = true;
                    }
                }
            }
        }
        require(saw_extremal, "at least one run must certify the extremal ratio non-vacuously");
    });

    criterion(9, "even reflection: two-sided comparability and reflected constants", [] {
        ChainReport flat = verify_even_reflection(as_measure(parse_weight("1 on (-1,2)")), 2.0, 1.0,
                                                  GridSpec{65, 1, {}, 1e-3});
        require(flat.overall, "flat chain must pass");
        for (const CheckRow& c : flat.checks) require(!c.vacuous, "no vacuous rows: " + c.name);
        require_close(row(flat, "comparability.pos-vs-neg").bound, 4.0, 1e-9, "flat cd^2");
        require_close(row(flat, "reflected.doubling.4cd3-bound").bound, 32.0, 1e-9, "flat 4 cd^3");

        ChainReport slope = verify_even_reflection(as_measure(power_weight(2.0, {-1.0, 2.0}, 1.0, -1.0)),
                                                   2.0, 1.0, GridSpec{129, 2, {}, 1e-3});
        require(slope.overall, "sloped chain must pass");
        for (const CheckRow& c : slope.checks) require(!c.vacuous, "no vacuous rows: " + c.name);
        require_close(row(slope, "comparability.pos-vs-neg").bound, 729.0 / 64, 1e-9, "sloped cd^2");
        require_close(row(slope, "reflected.doubling.4cd3-bound").bound, 19683.0 / 128, 1e-9,
                      "sloped 4 cd^3");

        ChainReport vac = verify_even_reflection(as_measure(parse_weight("1 on (0,1)")), 2.0, 1.0,
                                                 GridSpec{65, 1, {}, 1e-3});
        for (const CheckRow& c : vac.checks)
            require(c.vacuous, "support covering only (0,M) must leave rows vacuous");
    });

    criterion(10, "telescoped Hoelder bounds on random test functions, exact equality case", [] {
        std::vector<Interval> cells{{0.0, 0.125}, {0.25, 0.375}, {0.5, 0.625}, {0.75, 0.875}};
        for (const Weight& w : {power_weight(0.5, {0.0, 1.0}), parse_weight("1 on (0,1)")}) {
            for (int k = 0; k < 50; ++k) {
                PiecewiseLinearFn u = make_random_plf({0.0, 1.0}, 4 + k % 5, 4242 + k);
                require(holder_chain_bound(u, w, 2.0, cells).overall,
                        "telescoped bound violated by a random test function");
            }
        }
        PiecewiseLinearFn lin{{0.0, 1.0}, {0.0, 1.0}};
        ChainReport eq = holder_chain_bound(lin, parse_weight("1 on (0,1)"), 2.0, {{0.25, 0.75}});
        require(eq.overall, "equality case must pass");
        for (const CheckRow& c : eq.checks)
            require(std::abs(c.margin) < 1e-12, "linear/flat case must meet the bound exactly");
    });

    criterion(11, "window sweeps: flat and exponential uniform, growing rates only semiuniform", [] {
        GridSpec g{33, 1, {}, 1e-3};
        std::vector<double> centers;
        for (int k = 0; k <= 10; ++k) centers.push_back(static_cast<double>(k));
        SweepReport grow = window_sweep(testsupport::growth_weight(), 2.0, 1.0, centers, g);
        require(grow.classification == "semiuniformly-local-only",
                "growing rates must classify semiuniform, got " + grow.classification);
        for (size_t k = 1; k < grow.entries.size(); ++k)
            require(grow.entries[k].doubling.constant > grow.entries[k - 1].doubling.constant,
                    "per-center doubling constants must increase strictly");
        require(window_sweep(parse_weight("1 on (-12,12)"), 2.0, 1.0, centers, g).classification ==
                    "uniformly-local",
                "flat weight must classify uniform");
        require(window_sweep(parse_weight("exp(1x) on (-12,12)"), 2.0, 1.0, centers, g).classification ==
                    "uniformly-local",
                "exponential weight must classify uniform");
    });

    criterion(12, "a point mass defeats doubling and the admissibility verdict", [] {
        MeasureModel m = as_measure(parse_weight("1 on (-1,1)"));
        m.atoms.push_back({0.0, 1.0});
        ConstantReport d = doubling_constant(m, {-1.0, 1.0}, GridSpec{65, 3, {}, 1e-3});
        require(!d.converged, "doubling must fail to converge");
        require(d.levels.size() >= 2, "need at least two refinement levels");
        for (size_t l = 1; l < d.levels.size(); ++l)
            require(d.levels[l] >= 1.5 * d.levels[l - 1], "per-level doubling values must keep growing");
        AdmissibilityReport adm = check_admissible_within(m, 2.0, {-1.0, 1.0}, GridSpec{65, 1, {}, 1e-3});
        require(!adm.verdict, "admissibility verdict must be false");
    });

    if (failures == 0) {
        std::printf("all 12 criteria passed\n");
        return 0;
    }
    std::printf("%d of 12 criteria failed\n", failures);
    return 1;
}
