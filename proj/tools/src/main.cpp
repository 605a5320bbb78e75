#include "liouville_tools/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return liouville::tools::run_cli(argc, argv, std::cout, std::cerr); }
