#include <iostream>

#include "lanczos/cli.hpp"

int main(int argc, char** argv) { return lanczos::cli::main_entry(argc, argv, std::cout, std::cerr); }
