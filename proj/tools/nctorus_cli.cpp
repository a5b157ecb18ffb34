#include <iostream>

#include "nctorus/cli.hpp"

int main(int argc, char** argv) { return nct::cli_main(argc, argv, std::cout, std::cerr); }
