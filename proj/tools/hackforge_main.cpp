#include <iostream>

#include "hackforge/cli.hpp"

int main(int argc, char** argv) { return hackforge::run_cli(argc, argv, std::cout, std::cerr); }
