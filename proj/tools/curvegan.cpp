#include "curvegan/app/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return curvegan::app::run_cli(argc, argv, std::cout, std::cerr); }
