#include "gcdlcm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gcdlcm::cli::main(argc, argv, std::cout, std::cerr); }
