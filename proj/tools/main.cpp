#include <iostream>

#include "mrcmpsp/cli.hpp"

int main(int argc, char** argv) { return mrcmpsp::run_cli(argc, argv, std::cout, std::cerr); }
