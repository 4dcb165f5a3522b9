#include <iostream>

#include "optexec/cli/commands.hpp"

int main(int argc, char** argv) { return optexec::cli::run(argc, argv, std::cout, std::cerr); }
