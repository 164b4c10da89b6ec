#include "harmomorph/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return harmomorph::cli_main(argc, argv, std::cout, std::cerr); }
