#include <iostream>

#include "rglin/cli.hpp"

int main(int argc, char** argv) { return rglin::cli_main(argc, argv, std::cout, std::cerr); }
