#include <iostream>

#include "momentdet/cli.hpp"

int main(int argc, char** argv) { return momentdet::run_cli(argc, argv, std::cout, std::cerr); }
