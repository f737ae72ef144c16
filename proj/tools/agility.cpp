#include <iostream>

#include "agility/cli.hpp"

int main(int argc, char** argv) { return agility::run_cli(argc, argv, std::cout, std::cerr); }
