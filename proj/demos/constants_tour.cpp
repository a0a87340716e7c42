// Computes the three defining constants of a weight on a window and prints
// the refinement trail for each. Pass a weight expression and a window, or
// run bare for x^0.5 on (0,1).
#include <iostream>
#include <string>

#include "ap1d/ap1d.hpp"

using namespace ap1d;

static void show(const char* label, const ConstantReport& r) {
    std::cout << label << ": " << r.constant << (r.converged ? " (converged" : " (not converged")
              << ", levels";
    for (double v : r.levels) std::cout << " " << v;
    std::cout << ")\n";
}

int main(int argc, char** argv) {
    std::string expr = argc > 1 ? argv[1] : "x^0.5 on (0,1)";
    std::string window_arg = argc > 2 ? argv[2] : "0,1";
    double p = argc > 3 ? std::stod(argv[3]) : 2.0;
    try {
        Weight w = parse_weight(expr);
        Interval window = parse_interval_arg(window_arg);
        GridSpec g;
        std::cout << "weight   " << format_weight(w) << "\n";
        std::cout << "window   (" << window.a << ", " << window.b << "), p = " << p << "\n";
        show("muckenhoupt", ap_constant(w, p, window, g));
        show("doubling   ", doubling_constant(as_measure(w), window, g));
        show("poincare   ", poincare_window_max(as_measure(w), window, g));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
