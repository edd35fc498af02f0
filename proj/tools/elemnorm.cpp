#include <iostream>

#include "elemnorm/cli.hpp"

int main(int argc, char** argv) {
    return elemnorm::cli::run(argc, argv, std::cout, std::cerr);
}
