#include "taxsim/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return taxsim::run_cli(args, std::cout, std::cerr);
}
