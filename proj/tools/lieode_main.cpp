#include <iostream>
#include <vector>

#include "lieode/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lieode::cli::run(std::move(args), std::cout, std::cerr);
}
