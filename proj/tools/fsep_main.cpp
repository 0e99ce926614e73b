#include <iostream>

#include "fsep/cli.hpp"

int main(int argc, char** argv) { return fsep::cli::main(argc, argv, std::cout, std::cerr); }
