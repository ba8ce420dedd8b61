#include <iostream>

#include "advice/cli.hpp"

int main(int argc, char** argv) { return advice::cli::run(argc, argv, std::cout, std::cerr); }
