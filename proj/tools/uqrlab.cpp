#include <iostream>

#include "uqr/cli.hpp"

int main(int argc, char** argv) { return uqr::cli::run(argc, argv, std::cout, std::cerr); }
