#include <iostream>

#include "dmapper/cli.hpp"

int main(int argc, char** argv) {
    return dmapper::cli_main(argc, argv, std::cout, std::cerr);
}
