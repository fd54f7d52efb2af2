#include <iostream>

#include "cround/cli.hpp"

int main(int argc, char** argv) { return cround::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
