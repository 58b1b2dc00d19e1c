#include "empso/runner/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return empso::runner::run_cli(argc, argv, std::cout, std::cerr);
}
