#include <iostream>
#include <string>
#include <vector>

#include "ap1d/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ap1d::run(args, std::cout, std::cerr);
}
