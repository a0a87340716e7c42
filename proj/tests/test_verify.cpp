#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

#include <cmath>

using namespace ap1d;
using Catch::Approx;

namespace {

const CheckRow& row_named(const ChainReport& chain, const std::string& name) {
    for (const CheckRow& row : chain.checks)
        if (row.name == name) return row;
    FAIL("missing check row: " << name);
    static CheckRow dummy;
    return dummy;
}

} // namespace

TEST_CASE("admissibility verdicts: flat density, interior zero, atomic part") {
    GridSpec g{65, 2, {}, 1e-3};
    MeasureModel leb = as_measure(parse_weight("1 on (-2,2)"));
    AdmissibilityReport ok = check_admissible_within(leb, 2.0, {-1.0, 1.0}, g);
    CHECK(ok.verdict);
    CHECK(ok.chain.overall);
    CHECK(ok.doubling.constant == 2.0);
    CHECK(ok.poincare.constant == 0.5);
    CHECK(check_admissible_within(leb, 1.0, {-1.0, 1.0}, g).verdict);

    MeasureModel sq = as_measure(parse_weight("x^2 on (-1,1)"));
    AdmissibilityReport bad = check_admissible_within(sq, 2.0, {-1.0, 1.0}, g);
    CHECK(!bad.verdict);
    CHECK(!bad.chain.overall);
    CHECK(std::isinf(bad.poincare.constant));
    CHECK(row_named(bad.chain, "verdict").measured == 1.0);

    MeasureModel atomm = as_measure(parse_weight("1 on (-1,1)"));
    atomm.atoms.push_back({0.0, 1.0});
    AdmissibilityReport av = check_admissible_within(atomm, 2.0, {-1.0, 1.0}, g);
    CHECK(!av.verdict);
    CHECK(row_named(av.chain, "poincare.converged").vacuous);  // densities only; atoms stay uncertified
    CHECK(std::isnan(av.poincare.constant));

    CHECK_THROWS_AS(check_admissible_within(sq, 0.5, {-1.0, 1.0}, g), std::invalid_argument);
    CHECK_THROWS_AS(check_admissible_within(sq, 2.0, {-2.0, 2.0}, g), std::invalid_argument);
}

TEST_CASE("half-window admissibility from a converged Muckenhoupt constant") {
    GridSpec g{65, 2, {}, 1e-3};
    ChainReport r2 = verify_half_window_admissible(parse_weight("x^0.5 on (0,1)"), 2.0, {0.0, 1.0}, g);
    CHECK(r2.overall);
    CHECK(r2.checks.size() == 6);  // p > 1 omits the direct half-window Poincare bound
    for (const CheckRow& row : r2.checks) CHECK(row.pass);
    const CheckRow& cap2 = row_named(r2, "doubling.window.2p-bound");
    CHECK(!cap2.vacuous);
    CHECK(cap2.bound == Approx(16.0 / 3).epsilon(1e-9));

    ChainReport r1 = verify_half_window_admissible(parse_weight("1 on (0,1)"), 1.0, {0.0, 1.0}, g);
    CHECK(r1.overall);
    CHECK(r1.checks.size() == 7);
    const CheckRow& direct = row_named(r1, "half.poincare.half-ap-bound");
    CHECK(!direct.vacuous);
    CHECK(direct.measured == Approx(0.5).epsilon(1e-12));  // flat density attains C/2 exactly
    CHECK(direct.bound == Approx(0.5).epsilon(1e-12));

    // divergent hypothesis: every row reported vacuous, nothing asserted
    ChainReport vac = verify_half_window_admissible(parse_weight("x^0.5 on (0,1)"), 1.25, {0.0, 1.0}, g);
    CHECK(vac.overall);
    CHECK(vac.checks.size() == 6);
    for (const CheckRow& row : vac.checks) CHECK(row.vacuous);

    CHECK_THROWS_AS(verify_half_window_admissible(parse_weight("1 on (0,1)"), 2.0, {0.0, 2.0}, g),
                    std::invalid_argument);
}

TEST_CASE("Muckenhoupt bounds from the Poincare certificate") {
    GridSpec g{65, 1, {}, 1e-3};
    MeasureModel leb = as_measure(parse_weight("1 on (-3,3)"));
    for (double p : {1.0, 2.0}) {
        for (double theta : {1.5, 2.0}) {
            ChainReport r = verify_ap_from_poincare(leb, p, {-1.0, 1.0}, theta, g);
            CHECK(r.overall);
            for (const CheckRow& row : r.checks) {
                CHECK(row.pass);
                CHECK(!row.vacuous);
            }
        }
    }
    ChainReport r = verify_ap_from_poincare(leb, 2.0, {-1.0, 1.0}, 2.0, g);
    CHECK(row_named(r, "ap-window.bound-ratio").measured <= 1.0);
    CHECK(row_named(r, "extremal.limit-gap").measured < 0.10);

    // interior zero: the certificate diverges and the assertions go vacuous
    MeasureModel vee = as_measure(parse_weight("|x-0|^0.5 on (-1,1)"));
    ChainReport v = verify_ap_from_poincare(vee, 2.0, {-1.0, 1.0}, 2.0, g);
    CHECK(v.overall);
    for (const CheckRow& row : v.checks) CHECK(row.vacuous);

    CHECK_THROWS_AS(verify_ap_from_poincare(leb, 2.0, {-1.0, 1.0}, 1.0, g), std::invalid_argument);
    CHECK_THROWS_AS(verify_ap_from_poincare(leb, 2.0, {-1.0, 1.0}, 1e6, g), std::invalid_argument);
    MeasureModel atomm = as_measure(parse_weight("1 on (-1,1)"));
    atomm.atoms.push_back({0.0, 1.0});
    CHECK_THROWS_AS(verify_ap_from_poincare(atomm, 2.0, {-1.0, 1.0}, 2.0, g), std::invalid_argument);
}

TEST_CASE("reflected-weight Muckenhoupt bounds") {
    GridSpec g{65, 1, {}, 1e-3};
    ChainReport r = verify_reflection_bound(parse_weight("x^0.5 on (0,1)"), 2.0, 1.0, 5.0, g);
    CHECK(r.overall);
    for (const CheckRow& row : r.checks) CHECK(!row.vacuous);
    CHECK(row_named(r, "global.3p-bound").bound == Approx(12.0).epsilon(1e-3));
    CHECK(row_named(r, "short.2p-bound").bound == Approx(16.0 / 3).epsilon(1e-3));
    const CheckRow& dom = row_named(r, "restriction.dominated");
    CHECK(dom.measured <= dom.bound);

    ChainReport flat = verify_reflection_bound(parse_weight("1 on (0,1)"), 1.0, 1.0, 5.0, g);
    CHECK(flat.overall);
    CHECK(row_named(flat, "global.3p-bound").measured == Approx(1.0).epsilon(1e-12));

    // hypothesis constant diverges: all rows vacuous
    ChainReport vac = verify_reflection_bound(power_weight(1.0, {0.0, 1.0}), 2.0, 1.0, 5.0, g);
    CHECK(vac.overall);
    for (const CheckRow& row : vac.checks) CHECK(row.vacuous);

    CHECK_THROWS_AS(verify_reflection_bound(parse_weight("1 on (0,1)"), 2.0, 1.0, 0.5, g),
                    std::invalid_argument);
}

TEST_CASE("even-reflection chain: comparability and reflected constants") {
    GridSpec g{65, 1, {}, 1e-3};
    MeasureModel leb = as_measure(parse_weight("1 on (-2,3)"));
    ChainReport r = verify_even_reflection(leb, 2.0, 1.0, g);
    CHECK(r.overall);
    CHECK(r.checks.size() == 7);
    for (const CheckRow& row : r.checks) CHECK(!row.vacuous);
    CHECK(row_named(r, "comparability.pos-vs-neg").measured == Approx(1.0).epsilon(1e-12));
    CHECK(row_named(r, "comparability.neg-vs-pos").measured == Approx(1.0).epsilon(1e-12));
    CHECK(row_named(r, "reflected.doubling.4cd3-bound").measured == Approx(2.0).epsilon(1e-9));

    // support does not cover (-M, 2M): everything vacuous
    ChainReport nosup = verify_even_reflection(as_measure(parse_weight("1 on (0,1)")), 2.0, 1.0, g);
    CHECK(nosup.overall);
    CHECK(nosup.checks.size() == 7);
    for (const CheckRow& row : nosup.checks) CHECK(row.vacuous);

    // admissibility hypothesis fails (interior zero): downstream rows vacuous
    ChainReport badhyp = verify_even_reflection(as_measure(parse_weight("|x-0.5|^2 on (-2,3)")), 2.0, 1.0, g);
    CHECK(badhyp.overall);
    CHECK(!row_named(badhyp, "hypothesis.window-in-support").vacuous);
    CHECK(row_named(badhyp, "hypothesis.admissible").vacuous);
    CHECK(row_named(badhyp, "reflected.poincare.converged").vacuous);

    // sloped density: ambient doubling exactly (3/2)^3, comparability beats
    // the window-family square which would be too small
    MeasureModel sq = as_measure(power_weight(2.0, {-1.0, 2.0}, 1.0, -1.0));
    ChainReport e = verify_even_reflection(sq, 2.0, 1.0, GridSpec{129, 2, {}, 1e-3});
    CHECK(e.overall);
    const CheckRow& cmp = row_named(e, "comparability.pos-vs-neg");
    CHECK(cmp.bound == Approx(729.0 / 64).epsilon(1e-12));
    CHECK(cmp.measured > 6.0);
    CHECK(cmp.measured < cmp.bound);
    CHECK(row_named(e, "reflected.doubling.4cd3-bound").bound == Approx(19683.0 / 128).epsilon(1e-12));

    CHECK_THROWS_AS(verify_even_reflection(leb, 2.0, -1.0, g), std::invalid_argument);
}

TEST_CASE("lattice constants against per-interval input bounds") {
    GridSpec g{33, 1, {}, 1e-3};
    ChainReport r = verify_lattice_bounds(parse_weight("x^0.5 on (0,1)"), parse_weight("1 on (0,1)"), 2.0,
                                          {0.0, 1.0}, g);
    CHECK(r.overall);
    CHECK(row_named(r, "sum.2c-bound-ratio").measured <= 1.0);
    CHECK(row_named(r, "max.2c-bound-ratio").measured <= 1.0);
    CHECK(row_named(r, "min.2p1c-bound-ratio").measured <= 1.0);
    const CheckRow& count = row_named(r, "intervals.checked");
    CHECK(count.vacuous);
    CHECK(count.measured == 2080.0);  // all 65*64/2 grid intervals were in the claim

    ChainReport e = verify_lattice_bounds(parse_weight("1 on (-1,1)"), parse_weight("exp(1x) on (-1,1)"),
                                          1.0, {-1.0, 1.0}, g);
    CHECK(e.overall);

    CHECK_THROWS_AS(verify_lattice_bounds(parse_weight("1 on (0,1)"), parse_weight("1 on (2,3)"), 2.0,
                                          {0.0, 1.0}, g),
                    std::invalid_argument);
}

TEST_CASE("duality identity and involution") {
    GridSpec g{33, 1, {}, 1e-3};
    for (double p : {1.5, 2.0, 3.0}) {
        ChainReport r = verify_duality(parse_weight("x^0.5 on (0,1)"), p, {0.0, 1.0}, g);
        CHECK(r.overall);
        CHECK(row_named(r, "duality.max-rel-diff").measured <= 1e-12);
        CHECK(row_named(r, "involution.max-rel-diff").measured <= 1e-12);
    }
    CHECK(verify_duality(parse_weight("exp(1x) on (-1,1)"), 2.0, {-1.0, 1.0}, g).overall);
    CHECK(verify_duality(parse_weight("3*1 on (0,1)"), 1.5, {0.0, 1.0}, g).overall);
    CHECK_THROWS_AS(verify_duality(parse_weight("1 on (0,1)"), 1.0, {0.0, 1.0}, g), std::invalid_argument);
}

TEST_CASE("power-weight dichotomy on the unit interval") {
    GridSpec g{65, 1, {}, 1e-3};
    ChainReport div = counterexample_suite(2.0, 2.0, g);
    CHECK(div.overall);
    const CheckRow& pi = row_named(div, "poincare.le-2");
    CHECK(!pi.vacuous);
    CHECK(pi.measured <= 2.0);
    CHECK(!row_named(div, "doubling.converged").vacuous);
    CHECK(row_named(div, "ap.divergent").pass);

    ChainReport fin = counterexample_suite(0.5, 2.0, g);
    CHECK(fin.overall);
    CHECK(!row_named(fin, "ap.finite-converged").vacuous);

    ChainReport bdy = counterexample_suite(1.0, 2.0, g);
    CHECK(bdy.overall);
    CHECK(row_named(bdy, "ap.boundary-excluded").vacuous);  // boundary case carries data, no claim

    CHECK_THROWS_AS(counterexample_suite(2.0, 0.5, g), std::invalid_argument);
}

TEST_CASE("window sweeps classify uniform, semiuniform and failed convergence") {
    GridSpec g{33, 1, {}, 1e-3};
    std::vector<double> centers{0.0, 1.0, 2.0, 3.0};

    SweepReport u = window_sweep(parse_weight("1 on (-12,12)"), 2.0, 1.0, centers, g);
    CHECK(u.classification == "uniformly-local");
    CHECK(u.entries.size() == 4);

    SweepReport ue = window_sweep(parse_weight("exp(1x) on (-12,12)"), 2.0, 1.0, centers, g);
    CHECK(ue.classification == "uniformly-local");
    for (const SweepEntry& e : ue.entries) {
        CHECK(e.ap.constant == Approx(ue.entries[0].ap.constant).epsilon(1e-9));
        CHECK(e.doubling.constant == Approx(ue.entries[0].doubling.constant).epsilon(1e-9));
    }

    Weight grow = testsupport::growth_weight();
    std::vector<double> cg;
    for (int k = 0; k <= 10; ++k) cg.push_back(static_cast<double>(k));
    SweepReport sg = window_sweep(grow, 2.0, 1.0, cg, g);
    CHECK(sg.classification == "semiuniformly-local-only");
    for (size_t k = 1; k < sg.entries.size(); ++k)
        CHECK(sg.entries[k].doubling.constant > sg.entries[k - 1].doubling.constant);

    SweepReport nv = window_sweep(parse_weight("|x-0|^0.5 on (-12,12)"), 1.25, 1.0, {0.0, 3.0}, g);
    CHECK(nv.classification == "not-locally-verified");

    CHECK_THROWS_AS(window_sweep(parse_weight("1 on (-1,1)"), 2.0, 1.0, {5.0}, g), std::invalid_argument);
    CHECK_THROWS_AS(window_sweep(parse_weight("1 on (-1,1)"), 2.0, -1.0, {0.0}, g), std::invalid_argument);
    CHECK_THROWS_AS(window_sweep(parse_weight("1 on (-1,1)"), 2.0, 0.5, {}, g), std::invalid_argument);
    CHECK_THROWS_AS(window_sweep(parse_weight("1 on (-1,1)"), 2.0, 0.5, {0.0}, g, 0.5), std::invalid_argument);
}
