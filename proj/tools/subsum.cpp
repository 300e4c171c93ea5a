#include <iostream>

#include "subsum/cli.hpp"

int main(int argc, char** argv) { return subsum::cli::run(argc, argv, std::cout, std::cerr); }
