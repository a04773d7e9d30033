#include <iostream>

#include "cpmod/cli.hpp"

int main(int argc, char** argv) {
    return cpmod::run_cli(argc, argv, std::cout, std::cerr);
}
