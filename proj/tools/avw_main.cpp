#include <iostream>

#include "avw/cli/commands.hpp"

int main(int argc, char** argv) { return avw::cli::run(argc, argv, std::cout, std::cerr); }
