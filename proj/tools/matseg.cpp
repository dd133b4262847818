#include <iostream>

#include "matseg/cli.hpp"

int main(int argc, char** argv) { return matseg::cli::run(argc, argv, std::cout, std::cerr); }
