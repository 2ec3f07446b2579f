#include <iostream>

#include "zlab/cli.hpp"

int main(int argc, char** argv) { return zlab::run_cli(argc, argv, std::cout, std::cerr); }
