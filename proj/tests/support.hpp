#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "ap1d/ap1d.hpp"

namespace testsupport {

// plain composite Simpson; deliberately independent of the library quadrature
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2) ++n;
    double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Continuous piecewise-exponential weight on (-cells, cells): cell (k, k+1)
// carries rate 2^k/32, doubling cell over cell, so every per-window constant
// is strictly larger one center to the right and grows without a cap, which
// is what the sweep classifier is meant to notice.
inline ap1d::Weight growth_weight(int cells = 11) {
    using namespace ap1d;
    std::vector<Piece> pieces;
    double c = 1.0;  // value at the left end of the current cell
    for (int k = -cells; k < cells; ++k) {
        double beta = std::pow(2.0, k) / 32.0;
        // c * e^{beta (x - k)} stored as (c e^{-beta k}) e^{beta x}
        double lo = static_cast<double>(k);
        pieces.push_back({{lo, lo + 1.0}, {{TermKind::exponential, c * std::exp(-beta * lo), 0.0, beta}}});
        c *= std::exp(beta);
    }
    return make_weight(std::move(pieces));
}

} // namespace testsupport
