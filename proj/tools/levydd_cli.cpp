#include <iostream>

#include "levydd/cli.hpp"

int main(int argc, char** argv) { return levydd::cli::run(argc, argv, std::cout, std::cerr); }
