#include <iostream>

#include "groundstate/cli.hpp"

int main(int argc, char** argv) { return groundstate::cli::run(argc, argv, std::cout, std::cerr); }
