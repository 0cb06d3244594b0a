#include <iostream>

#include "qgrem/cli.hpp"

int main(int argc, char** argv) { return qgrem::cli::main(argc, argv, std::cout, std::cerr); }
