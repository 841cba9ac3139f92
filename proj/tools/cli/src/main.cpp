#include <iostream>

#include "mixdet_cli/cli.hpp"

int main(int argc, char** argv) { return mixdet::cli::run(argc, argv, std::cout, std::cerr); }
