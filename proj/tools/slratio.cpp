#include <iostream>

#include "slratio/cli.hpp"

int main(int argc, char** argv) { return slratio::cli::main(argc, argv, std::cout, std::cerr); }
