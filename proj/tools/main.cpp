#include <iostream>

#include "kgreason/cli.hpp"

int main(int argc, char** argv) { return kgreason::run_cli(argc, argv, std::cout, std::cerr); }
