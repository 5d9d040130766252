#include <iostream>

#include "epitaxy/cli/cli.hpp"

int main(int argc, char** argv) { return epitaxy::cli::run(argc, argv, std::cout, std::cerr); }
