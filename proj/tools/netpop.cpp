#include <iostream>

#include "netpop/cli.hpp"

int main(int argc, char** argv) { return netpop::cli_main(argc, argv, std::cout, std::cerr); }
