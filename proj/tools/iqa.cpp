#include <iostream>

#include "iqa/cli.hpp"

int main(int argc, char** argv) { return iqa::cli::run(argc, argv, std::cout, std::cerr); }
