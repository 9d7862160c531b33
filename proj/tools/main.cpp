#include <iostream>
#include <string>
#include <vector>

#include "ccabs/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ccabs::cli::run_cli(args, std::cout, std::cerr);
}
