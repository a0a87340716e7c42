// Reflects a weight about M, extends it periodically, and walks through the
// bound chain: the constant on (0,M), the global constant of the extension,
// and the short-interval constant, with their guaranteed multiples.
#include <cmath>
#include <iostream>
#include <string>

#include "ap1d/ap1d.hpp"

using namespace ap1d;

int main(int argc, char** argv) {
    std::string expr = argc > 1 ? argv[1] : "x^0.5 on (0,1)";
    double M = argc > 2 ? std::stod(argv[2]) : 1.0;
    double p = argc > 3 ? std::stod(argv[3]) : 2.0;
    try {
        Weight w = parse_weight(expr);
        Weight hatw = reflect_periodic(w, M);
        std::cout << "reflected weight  " << format_weight(hatw) << "\n";

        GridSpec g;
        double base = ap_constant(w, p, {0.0, M}, g).constant;
        std::cout << "constant on (0,M) " << base << "\n";

        Interval window{-5.0 * M, 5.0 * M};
        double global = ap_constant(hatw, p, window, g).constant;
        std::cout << "global extension  " << global << "  (allowed " << std::pow(3.0, p) * base << ")\n";

        GridSpec short_spec = g;
        short_spec.max_interval_length = M;
        double shorts = ap_constant(hatw, p, window, short_spec).constant;
        std::cout << "short intervals   " << shorts << "  (allowed " << std::pow(2.0, p) * base << ")\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
