#include <iostream>

#include "msens/cli.hpp"

int main(int argc, char** argv) { return msens::cli::run(argc, argv, std::cout, std::cerr); }
