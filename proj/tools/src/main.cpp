#include "flatform/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return flatform::cli::run(argc, argv, std::cout, std::cerr); }
