#include <iostream>

#include "ponfog_cli.hpp"

int main(int argc, char** argv) { return ponfog::cli::run_cli(argc, argv, std::cout, std::cerr); }
