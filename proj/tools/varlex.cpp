#include "varlex/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return varlex::cli::run(argc, argv, std::cout, std::cerr); }
