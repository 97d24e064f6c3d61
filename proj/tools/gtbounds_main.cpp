#include <iostream>

#include "gtbounds/cli.hpp"

int main(int argc, char** argv) { return gtbounds::cli_main(argc, argv, std::cout, std::cerr); }
