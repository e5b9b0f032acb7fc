#include <iostream>

#include "driftless/cli.hpp"

int main(int argc, char** argv) {
    return driftless::cli::run(argc, argv, std::cout, std::cerr);
}
