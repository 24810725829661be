#include "varbounds/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return varbounds::run_cli(argc, argv, std::cout, std::cerr); }
