#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "interval.hpp"

namespace ap1d {

// Result of a grid supremum scan: the certified lower bound for the constant,
// the interval (or point) attaining it, per-level values, and whether the
// last refinement moved the value by less than the relative tolerance.
struct ConstantReport {
    double constant = 0.0;
    std::optional<Interval> witness_interval;
    std::optional<double> witness_point;
    int grid_points = 0;          // finest level point count
    std::vector<double> levels;   // one value per refinement level
    bool converged = false;
};

// One inequality (or certificate) in a verification chain. A vacuous row has
// pass forced true: its hypothesis failed or no assertion is contracted, and
// bound/measured stay as data for the reader. margin = bound - measured.
struct CheckRow {
    std::string name;
    double bound = 0.0;
    double measured = 0.0;
    bool pass = true;
    double margin = 0.0;
    bool vacuous = false;
};

struct ChainReport {
    std::vector<CheckRow> checks;
    bool overall = true;
};

struct SweepEntry {
    double center = 0.0;
    ConstantReport ap;
    ConstantReport doubling;
};

struct SweepReport {
    double radius = 0.0;
    double cap = 8.0;  // spread allowed before "uniform" degrades
    std::vector<SweepEntry> entries;
    std::string classification;
};

namespace detail {

inline double round_sig12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline nlohmann::ordered_json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return round_sig12(v);
}

inline std::string csv_number(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

inline void finalize(CheckRow& row) {
    row.margin = row.bound - row.measured;
    if (std::isinf(row.measured) && std::isinf(row.bound) && row.bound == row.measured)
        row.margin = 0.0;
    if (row.vacuous) row.pass = true;
}

inline void finalize(ChainReport& chain) {
    std::sort(chain.checks.begin(), chain.checks.end(),
              [](const CheckRow& a, const CheckRow& b) { return a.name < b.name; });
    chain.overall = true;
    for (const CheckRow& row : chain.checks) chain.overall = chain.overall && row.pass;
}

inline nlohmann::ordered_json to_json(const ConstantReport& r) {
    nlohmann::ordered_json j;
    j["constant"] = detail::json_number(r.constant);
    if (r.witness_interval) {
        j["witness"] = {{"a", detail::json_number(r.witness_interval->a)},
                        {"b", detail::json_number(r.witness_interval->b)}};
    } else if (r.witness_point) {
        j["witness"] = {{"x", detail::json_number(*r.witness_point)}};
    } else {
        j["witness"] = nullptr;
    }
    j["grid_points"] = r.grid_points;
    nlohmann::ordered_json levels = nlohmann::ordered_json::array();
    for (double v : r.levels) levels.push_back(detail::json_number(v));
    j["levels"] = std::move(levels);
    j["converged"] = r.converged;
    return j;
}

inline nlohmann::ordered_json to_json(const CheckRow& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["bound"] = detail::json_number(r.bound);
    j["measured"] = detail::json_number(r.measured);
    j["pass"] = r.pass;
    j["margin"] = detail::json_number(r.margin);
    j["vacuous"] = r.vacuous;
    return j;
}

inline nlohmann::ordered_json to_json(const ChainReport& r) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const CheckRow& row : r.checks) checks.push_back(to_json(row));
    j["checks"] = std::move(checks);
    j["overall"] = r.overall;
    return j;
}

inline nlohmann::ordered_json to_json(const SweepReport& r) {
    nlohmann::ordered_json j;
    j["radius"] = detail::json_number(r.radius);
    j["cap"] = detail::json_number(r.cap);
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const SweepEntry& e : r.entries) {
        nlohmann::ordered_json je;
        je["center"] = detail::json_number(e.center);
        je["ap"] = to_json(e.ap);
        je["doubling"] = to_json(e.doubling);
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    j["classification"] = r.classification;
    return j;
}

inline std::string to_csv(const ConstantReport& r) {
    std::string s = "level,n_points,value\n";
    for (size_t l = 0; l < r.levels.size(); ++l) {
        int n = r.grid_points;
        for (size_t k = l + 1; k < r.levels.size(); ++k) n = (n - 1) / 2 + 1;
        s += std::to_string(l) + "," + std::to_string(n) + "," + detail::csv_number(r.levels[l]) + "\n";
    }
    return s;
}

inline std::string to_csv(const ChainReport& r) {
    std::string s = "name,bound,measured,pass,margin,vacuous\n";
    for (const CheckRow& row : r.checks) {
        s += row.name + "," + detail::csv_number(row.bound) + "," + detail::csv_number(row.measured) + "," +
             (row.pass ? "true" : "false") + "," + detail::csv_number(row.margin) + "," +
             (row.vacuous ? "true" : "false") + "\n";
    }
    return s;
}

inline std::string to_csv(const SweepReport& r) {
    std::string s = "center,ap_constant,ap_converged,doubling_constant,doubling_converged\n";
    for (const SweepEntry& e : r.entries) {
        s += detail::csv_number(e.center) + "," + detail::csv_number(e.ap.constant) + "," +
             (e.ap.converged ? "true" : "false") + "," + detail::csv_number(e.doubling.constant) + "," +
             (e.doubling.converged ? "true" : "false") + "\n";
    }
    return s;
}

} // namespace ap1d
