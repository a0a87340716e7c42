#pragma once

#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "parse.hpp"
#include "piecewise_linear.hpp"
#include "verify.hpp"

namespace ap1d {

namespace detail {

struct CliOptions {
    std::string weight;
    std::string weight2;
    std::string window;
    std::string centers;
    std::string format = "json";
    double p = 2.0;
    double theta = 2.0;
    double alpha = 0.0;
    double M = 0.0;
    double span = 0.0;  // 0 = default 5*M
    double radius = 1.0;
    double cap = 8.0;
    double point = std::nan("");
    int count = 8;
    unsigned long long seed = 7101;
    bool csv = false;
    GridSpec grid;
};

inline void add_grid_options(CLI::App* sub, CliOptions& o) {
    sub->add_option("--grid", o.grid.n_points, "grid points per window at level 0")
        ->capture_default_str()
        ->check(CLI::Range(3, 1 << 20));
    sub->add_option("--refine", o.grid.refine_levels, "dyadic refinement levels")
        ->capture_default_str()
        ->check(CLI::Range(0, 12));
    sub->add_option("--tolerance", o.grid.tolerance, "relative convergence tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option_function<double>(
        "--max-length", [&o](double v) { o.grid.max_interval_length = v; },
        "restrict the interval family to lengths at most this")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", o.format, "output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
}

inline void add_weight_option(CLI::App* sub, CliOptions& o) {
    sub->add_option("--weight,-w", o.weight, "weight expression, e.g. \"x^0.5 on (0,1)\"")->required();
}

inline void emit(std::ostream& out, const nlohmann::ordered_json& j) { out << j.dump(2) << "\n"; }

inline nlohmann::ordered_json constant_payload(const char* op, const ConstantReport& r) {
    nlohmann::ordered_json j;
    j["op"] = op;
    j["report"] = to_json(r);
    return j;
}

inline nlohmann::ordered_json chain_payload(const char* op, const ChainReport& r) {
    nlohmann::ordered_json j;
    j["op"] = op;
    j["report"] = to_json(r);
    return j;
}

inline void merge_chain(ChainReport& into, const std::string& prefix, const ChainReport& part) {
    for (CheckRow row : part.checks) {
        row.name = prefix + row.name;
        into.checks.push_back(std::move(row));
    }
}

} // namespace detail

// Entry point shared by the binary and the tests. Exit codes: 0 success (for
// verification ops: every non-vacuous check passed), 1 verification failure,
// 2 usage or input error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"defining constants and certified bounds for weighted measures on the line"};
    app.require_subcommand(1);
    detail::CliOptions o;

    CLI::App* ap = app.add_subcommand("ap", "Muckenhoupt constant over grid subintervals of a window");
    detail::add_weight_option(ap, o);
    ap->add_option("--p", o.p, "exponent, p >= 1")->required();
    ap->add_option("--window", o.window, "window \"a,b\"")->required();
    detail::add_grid_options(ap, o);

    CLI::App* dbl = app.add_subcommand("doubling", "doubling constant over balls with 2B inside the window");
    detail::add_weight_option(dbl, o);
    dbl->add_option("--window", o.window, "window \"a,b\"")->required();
    detail::add_grid_options(dbl, o);

    CLI::App* poi = app.add_subcommand("poincare", "sharp (b-a)-paired Poincare constant of an interval");
    detail::add_weight_option(poi, o);
    poi->add_option("--window", o.window, "the interval \"a,b\"")->required();
    poi->add_option("--point", o.point, "evaluate the step lower bound at t instead of the supremum");
    detail::add_grid_options(poi, o);

    CLI::App* refl = app.add_subcommand("reflect", "reflect about M and extend 2M-periodically");
    detail::add_weight_option(refl, o);
    refl->add_option("--M", o.M, "reflection point, weight is used on (0,M)")->required();

    CLI::App* conj = app.add_subcommand("conjugate", "dual weight w^{1/(1-p)}");
    detail::add_weight_option(conj, o);
    conj->add_option("--p", o.p, "exponent, p > 1")->required();

    CLI::App* lat = app.add_subcommand("lattice", "constants of sum/max/min against per-interval bounds");
    detail::add_weight_option(lat, o);
    lat->add_option("--weight2", o.weight2, "second weight expression")->required();
    lat->add_option("--p", o.p, "exponent, p >= 1")->required();
    lat->add_option("--window", o.window, "window \"a,b\"")->required();
    detail::add_grid_options(lat, o);

    CLI::App* chain = app.add_subcommand("verify-chain",
                                         "admissibility, half-window, Poincare-to-Muckenhoupt and duality chain");
    detail::add_weight_option(chain, o);
    chain->add_option("--p", o.p, "exponent, p >= 1")->required();
    chain->add_option("--window", o.window, "window \"a,b\"")->required();
    chain->add_option("--theta", o.theta, "dilation for the Poincare-to-Muckenhoupt step (> 1)");
    chain->add_option("--M", o.M, "also run the even-reflection chain about 0 and M");
    detail::add_grid_options(chain, o);

    CLI::App* rv = app.add_subcommand("reflect-verify", "reflected-weight Muckenhoupt bounds");
    detail::add_weight_option(rv, o);
    rv->add_option("--p", o.p, "exponent, p >= 1")->required();
    rv->add_option("--M", o.M, "reflection point")->required();
    rv->add_option("--span", o.span, "check window (-span, span); default 5*M");
    detail::add_grid_options(rv, o);

    CLI::App* cex = app.add_subcommand("counterexample", "power-weight dichotomy suite on (0,1)");
    cex->add_option("--alpha", o.alpha, "power exponent")->required();
    cex->add_option("--p", o.p, "exponent, p >= 1")->required();
    detail::add_grid_options(cex, o);

    CLI::App* sw = app.add_subcommand("sweep", "per-center constants over sliding windows");
    detail::add_weight_option(sw, o);
    sw->add_option("--p", o.p, "exponent, p >= 1")->required();
    sw->add_option("--radius", o.radius, "window radius")->required();
    sw->add_option("--centers", o.centers, "centers \"a:b:step\"")->required();
    sw->add_option("--cap", o.cap, "allowed spread before uniformity degrades");
    detail::add_grid_options(sw, o);

    CLI::App* hold = app.add_subcommand("holder", "chained Holder bound battery on random test functions");
    detail::add_weight_option(hold, o);
    hold->add_option("--p", o.p, "exponent, p > 1")->required();
    hold->add_option("--window", o.window, "window \"a,b\"")->required();
    hold->add_option("--count", o.count, "number of random test functions")->check(CLI::Range(1, 1000));
    hold->add_option("--seed", o.seed, "seed for the test-function generator");
    detail::add_grid_options(hold, o);

    try {
        std::vector<const char*> argv;
        argv.push_back("ap1d");
        for (const std::string& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        o.csv = (o.format == "csv");
        validate(o.grid);
        if (ap->parsed()) {
            Weight w = parse_weight(o.weight);
            ConstantReport r = ap_constant(w, o.p, parse_interval_arg(o.window), o.grid);
            if (o.csv) out << to_csv(r);
            else detail::emit(out, detail::constant_payload("ap", r));
            return 0;
        }
        if (dbl->parsed()) {
            Weight w = parse_weight(o.weight);
            ConstantReport r = doubling_constant(as_measure(w), parse_interval_arg(o.window), o.grid);
            if (o.csv) out << to_csv(r);
            else detail::emit(out, detail::constant_payload("doubling", r));
            return 0;
        }
        if (poi->parsed()) {
            Weight w = parse_weight(o.weight);
            MeasureModel m = as_measure(w);
            Interval I = parse_interval_arg(o.window);
            if (!std::isnan(o.point)) {
                nlohmann::ordered_json j;
                j["op"] = "poincare.step";
                j["t"] = detail::json_number(o.point);
                j["lower_bound"] = detail::json_number(step_lower_bound(m, I, o.point));
                detail::emit(out, j);
                return 0;
            }
            ConstantReport r = sharp_poincare_constant(m, I, o.grid);
            if (o.csv) out << to_csv(r);
            else detail::emit(out, detail::constant_payload("poincare", r));
            return 0;
        }
        if (refl->parsed()) {
            Weight w = parse_weight(o.weight);
            Weight hatw = reflect_periodic(w, o.M);
            nlohmann::ordered_json j;
            j["op"] = "reflect";
            j["weight"] = format_weight(hatw);
            j["period"] = detail::json_number(hatw.period());
            detail::emit(out, j);
            return 0;
        }
        if (conj->parsed()) {
            Weight w = parse_weight(o.weight);
            nlohmann::ordered_json j;
            j["op"] = "conjugate";
            j["weight"] = format_weight(conjugate(w, o.p));
            detail::emit(out, j);
            return 0;
        }

        ChainReport result;
        const char* opname = nullptr;
        if (lat->parsed()) {
            opname = "lattice";
            result = verify_lattice_bounds(parse_weight(o.weight), parse_weight(o.weight2), o.p,
                                           parse_interval_arg(o.window), o.grid);
        } else if (chain->parsed()) {
            opname = "verify-chain";
            Weight w = parse_weight(o.weight);
            MeasureModel m = as_measure(w);
            Interval window = parse_interval_arg(o.window);
            ChainReport merged;
            detail::merge_chain(merged, "00.admissible.",
                                check_admissible_within(m, o.p, window, o.grid).chain);
            detail::merge_chain(merged, "10.half-window.",
                                verify_half_window_admissible(w, o.p, window, o.grid));
            detail::merge_chain(merged, "20.ap-from-poincare.",
                                verify_ap_from_poincare(m, o.p, window, o.theta, o.grid));
            if (o.p > 1.0)
                detail::merge_chain(merged, "30.duality.", verify_duality(w, o.p, window, o.grid));
            if (o.M > 0.0)
                detail::merge_chain(merged, "40.even-reflection.",
                                    verify_even_reflection(m, o.p, o.M, o.grid));
            finalize(merged);
            result = std::move(merged);
        } else if (rv->parsed()) {
            opname = "reflect-verify";
            double span = o.span > 0.0 ? o.span : 5.0 * o.M;
            result = verify_reflection_bound(parse_weight(o.weight), o.p, o.M, span, o.grid);
        } else if (cex->parsed()) {
            opname = "counterexample";
            result = counterexample_suite(o.alpha, o.p, o.grid);
        } else if (sw->parsed()) {
            Weight w = parse_weight(o.weight);
            SweepReport r = window_sweep(w, o.p, o.radius, parse_centers_arg(o.centers), o.grid, o.cap);
            if (o.csv) out << to_csv(r);
            else {
                nlohmann::ordered_json j;
                j["op"] = "sweep";
                j["report"] = to_json(r);
                detail::emit(out, j);
            }
            return 0;
        } else if (hold->parsed()) {
            opname = "holder";
            Weight w = parse_weight(o.weight);
            Interval window = parse_interval_arg(o.window);
            // alternating level-0 grid cells make a disjoint chain
            std::vector<double> xs = grid_points(window, o.grid, 0);
            std::vector<Interval> cells;
            for (size_t i = 0; i + 1 < xs.size(); i += 2) cells.push_back({xs[i], xs[i + 1]});
            ChainReport merged;
            for (int k = 0; k < o.count; ++k) {
                PiecewiseLinearFn u = make_random_plf(window, 3 + k % 5, o.seed + static_cast<unsigned long long>(k));
                char prefix[32];
                std::snprintf(prefix, sizeof prefix, "plf.%03d.", k);
                detail::merge_chain(merged, prefix, holder_chain_bound(u, w, o.p, cells));
            }
            finalize(merged);
            result = std::move(merged);
        }
        if (o.csv) out << to_csv(result);
        else detail::emit(out, detail::chain_payload(opname, result));
        return result.overall ? 0 : 1;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace ap1d
