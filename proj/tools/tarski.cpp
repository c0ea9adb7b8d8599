#include <iostream>

#include "tarski/cli.hpp"

int main(int argc, char** argv) { return tarski::cli::run(argc, argv, std::cout, std::cerr); }
