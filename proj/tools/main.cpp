#include <iostream>
#include <string>
#include <vector>

#include "dpor/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dpor::run_cli(args, std::cout, std::cerr);
}
