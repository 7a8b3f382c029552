#include "hetdist/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hetdist::cli::run(argc, argv, std::cout, std::cerr); }
