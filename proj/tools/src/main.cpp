#include <iostream>

#include "parifs_cli/cli.hpp"

int main(int argc, char** argv) { return parifs::cli::run(argc, argv, std::cout, std::cerr); }
